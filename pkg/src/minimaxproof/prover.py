"""The proving pipeline and its certificates.

``prove_nonneg`` runs normalize -> Remez -> independent sup-norm re-estimate ->
exact positivity of ``poly - eps_cert`` and records everything needed to
re-check the result in a :class:`ProofCertificate`.  ``verify_certificate``
re-checks a certificate without running Remez again.

The approximation error is a sampled estimate (a lower bound of the true
sup norm), inflated by ``safety_factor`` before the positivity step; a
``proved`` verdict is therefore a numerical proof, not a formal one.
"""

from __future__ import annotations

import datetime as _dt
import json
import math
from dataclasses import dataclass, field, replace
from typing import Optional

import mpmath as mp
import numpy as np

from . import __version__
from .errors import CertificateError, ConvergenceError, MinimaxProofError
from .exprlang import EvalEnv, eval_expr, parse_expr, to_text, uses_quadrature
from .minimax import FunctionHandle, RemezOptions, infnorm, remez_minimax
from .normalize import EndpointProfile, build_normalized, endpoint_limit, LEFT, RIGHT
from .polycore import Interval, PositivityEvidence, Polynomial, assert_positive_on

SCHEMA = "cert-v1"
PROVED, REFUTED, INCONCLUSIVE = "proved", "refuted-candidate", "inconclusive"
VERDICTS = (PROVED, REFUTED, INCONCLUSIVE)

RESIDUAL_SAMPLES = 6143      # fresh grid, deliberately not the Remez grid size
SCAN_SAMPLES = 2049
LIMIT_RTOL = 1e-6


@dataclass(frozen=True)
class ProofJob:
    """One inequality ``f(x) >= 0`` on [a, b].

    ``a`` and ``b`` are numbers or expression texts (``"pi/2"``).  Hints are
    expression texts for the end limits.  ``grid_precision`` is ``"auto"``
    (double for quadrature-backed expressions, extended otherwise),
    ``"double"`` or ``"extended"``.
    """

    expr: str
    a: object = 0.0
    b: object = 1.0
    n: int = 0
    m: int = 0
    degree: int = 1
    alpha_hint: Optional[str] = None
    beta_hint: Optional[str] = None
    safety_factor: float = 1.05
    precision: int = 30
    grid_precision: str = "auto"
    label: str = ""

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError("degree must be >= 0")
        if not self.safety_factor >= 1:
            raise ValueError("safety_factor must be >= 1")
        if self.n < 0 or self.m < 0:
            raise ValueError("root orders must be >= 0")
        if self.grid_precision not in ("auto", "double", "extended"):
            raise ValueError(f"unknown grid_precision {self.grid_precision!r}")
        if self.precision < 15:
            raise ValueError("precision must be at least 15 decimal digits")

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "expr": self.expr,
            "a": self.a if isinstance(self.a, str) else float(self.a),
            "b": self.b if isinstance(self.b, str) else float(self.b),
            "n": self.n,
            "m": self.m,
            "degree": self.degree,
            "alpha_hint": self.alpha_hint,
            "beta_hint": self.beta_hint,
            "safety_factor": float(self.safety_factor),
            "precision": self.precision,
            "grid_precision": self.grid_precision,
        }

    @classmethod
    def from_dict(cls, d: dict) -> ProofJob:
        return cls(
            expr=d["expr"], a=d["a"], b=d["b"], n=int(d["n"]), m=int(d["m"]),
            degree=int(d["degree"]), alpha_hint=d.get("alpha_hint"), beta_hint=d.get("beta_hint"),
            safety_factor=float(d["safety_factor"]), precision=int(d["precision"]),
            grid_precision=d.get("grid_precision", "auto"), label=d.get("label", ""),
        )


@dataclass
class ProofCertificate:
    job: ProofJob
    alpha: float
    beta: float
    alpha_method: str
    beta_method: str
    poly: Optional[Polynomial]
    eps_raw: Optional[float]
    eps_cert: Optional[float]
    positivity: Optional[PositivityEvidence]
    residual_check: Optional[float]
    verdict: str
    interval: Interval
    witness: Optional[dict] = None
    remez: Optional[dict] = None
    timestamp: str = ""
    tool_version: str = __version__
    precision: int = 30
    schema: str = SCHEMA

    def to_dict(self) -> dict:
        return {
            "schema": self.schema,
            "job": self.job.to_dict(),
            "normalized": {
                "a": self.interval.lo,
                "b": self.interval.hi,
                "n": self.job.n,
                "m": self.job.m,
                "alpha": self.alpha,
                "beta": self.beta,
                "alpha_method": self.alpha_method,
                "beta_method": self.beta_method,
            },
            "poly": None if self.poly is None else {
                "degree": self.poly.degree,
                "coeffs": list(self.poly.coeffs),
            },
            "eps_raw": self.eps_raw,
            "eps_cert": self.eps_cert,
            "eps_note": "eps_raw is a sampled estimate (lower bound) of max|g - poly|; "
                        "eps_cert = safety_factor * eps_raw",
            "positivity": None if self.positivity is None else self.positivity.to_dict(),
            "residual_check": self.residual_check,
            "verdict": self.verdict,
            "witness": self.witness,
            "remez": self.remez,
            "timestamp": self.timestamp,
            "tool_version": self.tool_version,
            "precision": self.precision,
        }

    def to_json(self) -> str:
        return dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d) -> ProofCertificate:
        return _certificate_from_dict(d)

    @classmethod
    def from_json(cls, text: str) -> ProofCertificate:
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CertificateError(f"not valid JSON: {exc}") from exc
        return _certificate_from_dict(d)


# -- JSON -----------------------------------------------------------------------

def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    return format(x, ".17g")


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """Deterministic JSON with floats written to 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + dumps(v, indent, _level + 1) for v in obj) + "\n" + end + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (np.floating, np.integer)):
        return dumps(obj.item(), indent, _level)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _need(d, key, path, kind=None):
    if not isinstance(d, dict):
        raise CertificateError("expected an object", path)
    if key not in d:
        raise CertificateError("missing field", f"{path}.{key}" if path else key)
    v = d[key]
    p = f"{path}.{key}" if path else key
    if kind is float:
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise CertificateError("expected a number", p)
        return float(v)
    if kind is int:
        if isinstance(v, bool) or not isinstance(v, int):
            raise CertificateError("expected an integer", p)
        return v
    if kind is str and not isinstance(v, str):
        raise CertificateError("expected a string", p)
    return v


def _opt_float(d, key, path):
    if d.get(key) is None:
        return None
    return _need(d, key, path, float)


def _certificate_from_dict(d) -> ProofCertificate:
    if not isinstance(d, dict):
        raise CertificateError("certificate must be a JSON object")
    schema = _need(d, "schema", "", str)
    if schema != SCHEMA:
        raise CertificateError(f"unsupported schema {schema!r}", "schema")
    jd = _need(d, "job", "")
    for k, kind in (("expr", str), ("n", int), ("m", int), ("degree", int),
                    ("safety_factor", float), ("precision", int)):
        _need(jd, k, "job", kind)
    for k in ("a", "b"):
        v = _need(jd, k, "job")
        if isinstance(v, bool) or not isinstance(v, (str, int, float)):
            raise CertificateError("expected a number or expression text", f"job.{k}")
    try:
        job = ProofJob.from_dict(jd)
    except (ValueError, TypeError) as exc:
        raise CertificateError(str(exc), "job") from exc
    nd = _need(d, "normalized", "")
    lo, hi = _need(nd, "a", "normalized", float), _need(nd, "b", "normalized", float)
    try:
        iv = Interval(lo, hi)
    except ValueError as exc:
        raise CertificateError(str(exc), "normalized") from exc
    for k in ("n", "m"):
        if _need(nd, k, "normalized", int) != getattr(job, k):
            raise CertificateError("root order disagrees with job", f"normalized.{k}")
    verdict = _need(d, "verdict", "", str)
    if verdict not in VERDICTS:
        raise CertificateError(f"unknown verdict {verdict!r}", "verdict")
    poly = None
    pd = d.get("poly")
    if pd is not None:
        deg = _need(pd, "degree", "poly", int)
        coeffs = _need(pd, "coeffs", "poly")
        if not isinstance(coeffs, list) or not coeffs:
            raise CertificateError("expected a non-empty list", "poly.coeffs")
        for i, c in enumerate(coeffs):
            if isinstance(c, bool) or not isinstance(c, (int, float)):
                raise CertificateError("expected a number", f"poly.coeffs[{i}]")
        if deg != len(coeffs) - 1:
            raise CertificateError(
                f"degree {deg} does not match {len(coeffs)} coefficients", "poly.degree")
        if coeffs[-1] == 0 and deg > 0:
            raise CertificateError("leading coefficient is zero", "poly.coeffs")
        poly = Polynomial(coeffs)
    positivity = None
    if d.get("positivity") is not None:
        try:
            positivity = PositivityEvidence.from_dict(d["positivity"])
        except (KeyError, TypeError, ValueError) as exc:
            raise CertificateError(f"malformed positivity evidence ({exc})", "positivity") from exc
    if verdict == PROVED:
        for key in ("poly", "eps_raw", "eps_cert", "positivity", "residual_check"):
            if d.get(key) is None:
                raise CertificateError("required for a proved verdict", key)
    return ProofCertificate(
        job=job,
        alpha=_need(nd, "alpha", "normalized", float),
        beta=_need(nd, "beta", "normalized", float),
        alpha_method=_need(nd, "alpha_method", "normalized", str),
        beta_method=_need(nd, "beta_method", "normalized", str),
        poly=poly,
        eps_raw=_opt_float(d, "eps_raw", ""),
        eps_cert=_opt_float(d, "eps_cert", ""),
        positivity=positivity,
        residual_check=_opt_float(d, "residual_check", ""),
        verdict=verdict,
        interval=iv,
        witness=d.get("witness"),
        remez=d.get("remez"),
        timestamp=str(d.get("timestamp", "")),
        tool_version=str(d.get("tool_version", "")),
        precision=int(d.get("precision", job.precision)),
    )


# -- building blocks ------------------------------------------------------------

def expression_handle(text: str, precision: int = 30, grid_precision: str = "auto") -> FunctionHandle:
    """FunctionHandle for an expression in x (extended + optional double path)."""
    ast = parse_expr(text)

    def f_mp(x):
        return eval_expr(ast, EvalEnv(x, "mp", mp.mp.dps))

    def f_np(xs):
        return eval_expr(ast, EvalEnv(xs, "np"))

    if grid_precision == "auto":
        grid_precision = "double" if uses_quadrature(ast) else "extended"
    return FunctionHandle(f_mp, to_text(ast), f_np, grid_precision, precision)


def _endpoint(v):
    if isinstance(v, str):
        ast = parse_expr(v)
        return lambda: eval_expr(ast, EvalEnv(0, "mp", mp.mp.dps))
    return v


def job_profile(job: ProofJob) -> EndpointProfile:
    a, b = _endpoint(job.a), _endpoint(job.b)
    with mp.workdps(job.precision):
        lo = float(a() if callable(a) else a)
        hi = float(b() if callable(b) else b)
    return EndpointProfile(Interval(lo, hi), job.n, job.m, a, b)


def normalize_job(job: ProofJob):
    f = expression_handle(job.expr, job.precision, job.grid_precision)
    profile = job_profile(job)
    return build_normalized(f, profile, job.alpha_hint, job.beta_hint)


def _negative_sample(g: FunctionHandle, iv: Interval, samples: int = SCAN_SAMPLES):
    xs = np.linspace(iv.lo, iv.hi, samples)
    vals = g.sample(xs)
    i = int(np.argmin(vals))
    if vals[i] < 0:
        # confirm in extended precision before calling it a counterexample
        v = float(g(xs[i]))
        if v < 0:
            return {"kind": "interior-sample", "x": float(xs[i]), "g": v}
    return None


def _timestamp() -> str:
    return _dt.datetime.now(_dt.timezone.utc).replace(microsecond=0).isoformat()


def prove_nonneg(job: ProofJob, remez_opts: RemezOptions | None = None) -> ProofCertificate:
    """Attempt to prove ``f >= 0`` on [a, b]; never returns proved unless every check passed."""
    nf = normalize_job(job)
    iv = nf.profile.iv
    base = dict(job=job, alpha=nf.alpha, beta=nf.beta, alpha_method=nf.alpha_method,
                beta_method=nf.beta_method, interval=iv, timestamp=_timestamp(),
                precision=job.precision)
    if nf.alpha < 0 or nf.beta < 0:
        side, val = ("alpha", nf.alpha) if nf.alpha < 0 else ("beta", nf.beta)
        return ProofCertificate(poly=None, eps_raw=None, eps_cert=None, positivity=None,
                                residual_check=None, verdict=REFUTED,
                                witness={"kind": "endpoint", "side": side, "value": val}, **base)

    converged = True
    try:
        res = remez_minimax(nf.g, iv, job.degree, remez_opts)
    except ConvergenceError as exc:
        if exc.best is None:
            raise
        res, converged = exc.best, False
    eps_raw = float(res.err)
    eps_cert = float(job.safety_factor * eps_raw)
    residual = infnorm(nf.g, res.poly, iv, samples=RESIDUAL_SAMPLES)
    positivity = assert_positive_on(res.poly, iv, eps_cert)

    witness = None
    if positivity.positive and residual <= eps_cert:
        verdict = PROVED
    else:
        witness = _negative_sample(nf.g, iv)
        verdict = REFUTED if witness else INCONCLUSIVE
    remez_info = {
        "converged": converged,
        "iterations": res.iterations,
        "leveling_tol": res.leveling_tol,
        "reference": list(res.reference),
        "residuals": list(res.residuals),
    }
    return ProofCertificate(poly=res.poly, eps_raw=eps_raw, eps_cert=eps_cert, positivity=positivity,
                            residual_check=float(residual), verdict=verdict, witness=witness,
                            remez=remez_info, **base)


# -- verification ---------------------------------------------------------------

@dataclass
class VerificationReport:
    checks: list = field(default_factory=list)   # (name, passed, detail)

    def add(self, name: str, passed: bool, detail: str = ""):
        self.checks.append((name, bool(passed), detail))

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(ok for _, ok, _ in self.checks)

    def lines(self) -> list:
        return [f"{'PASS' if ok else 'FAIL'} {name}: {detail}" for name, ok, detail in self.checks]

    def to_dict(self) -> dict:
        return {"passed": self.passed,
                "checks": [{"name": n, "passed": ok, "detail": d} for n, ok, d in self.checks]}


def quasi_random_points(iv: Interval, count: int) -> np.ndarray:
    """Additive-recurrence (golden ratio) points in ``iv``, endpoints included."""
    k = np.arange(1, count + 1)
    u = np.mod(0.5 + k * 0.6180339887498949, 1.0)
    return np.concatenate([[iv.lo], iv.lo + u * iv.width, [iv.hi]])


def _close(x: float, y: float, rtol: float = LIMIT_RTOL) -> bool:
    return abs(x - y) <= rtol * max(abs(x), abs(y)) + 1e-300


def verify_certificate(cert, resample: int = 2048) -> VerificationReport:
    """Re-check a certificate from its own data plus function evaluation.

    Accepts a ProofCertificate, a dict or JSON text; malformed input raises
    CertificateError naming the offending field.
    """
    if isinstance(cert, str):
        cert = ProofCertificate.from_json(cert)
    elif isinstance(cert, dict):
        cert = ProofCertificate.from_dict(cert)
    report = VerificationReport()
    report.add("structure", True, f"schema {cert.schema}, verdict {cert.verdict}")
    job = cert.job

    try:
        profile = job_profile(job)
    except MinimaxProofError as exc:
        report.add("interval", False, str(exc))
        return report
    same_iv = profile.iv == cert.interval
    report.add("interval", same_iv,
               f"job gives [{profile.iv.lo!r}, {profile.iv.hi!r}], certificate has "
               f"[{cert.interval.lo!r}, {cert.interval.hi!r}]")
    # evaluate with the certificate's interval so tampering there shows up below
    profile = replace(profile, iv=cert.interval, a_exact=profile.a_exact if same_iv else None,
                      b_exact=profile.b_exact if same_iv else None)
    f = expression_handle(job.expr, job.precision, job.grid_precision)
    try:
        left = endpoint_limit(f, profile, LEFT, job.alpha_hint)
        right = endpoint_limit(f, profile, RIGHT, job.beta_hint)
        ok = _close(left.value, cert.alpha) and _close(right.value, cert.beta)
        report.add("endpoint_limits", ok,
                   f"alpha {left.value!r} vs {cert.alpha!r}, beta {right.value!r} vs {cert.beta!r}")
    except MinimaxProofError as exc:
        report.add("endpoint_limits", False, str(exc))
        return report

    if cert.verdict == REFUTED:
        w = cert.witness or {}
        if w.get("kind") == "endpoint":
            val = left.value if w.get("side") == "alpha" else right.value
            report.add("refutation", val < 0, f"{w.get('side')} = {val!r}")
        elif w.get("kind") == "interior-sample":
            nf = build_normalized(f, profile, job.alpha_hint, job.beta_hint)
            val = float(nf.g(w["x"]))
            report.add("refutation", val < 0, f"g({w['x']!r}) = {val!r}")
        else:
            report.add("refutation", False, "certificate carries no usable witness")
        return report
    if cert.verdict == INCONCLUSIVE:
        report.add("claims", True, "inconclusive certificate makes no claim beyond its data")
        return report

    report.add("end_signs", cert.alpha > 0 and cert.beta > 0,
               f"alpha = {cert.alpha!r}, beta = {cert.beta!r}")
    consistent = (cert.eps_cert >= cert.eps_raw >= 0 and
                  _close(cert.eps_cert, job.safety_factor * cert.eps_raw, 1e-12))
    report.add("eps_consistency", consistent,
               f"eps_cert {cert.eps_cert!r} vs safety_factor * eps_raw "
               f"{job.safety_factor * cert.eps_raw!r}")
    ev = assert_positive_on(cert.poly, cert.interval, cert.eps_cert)
    report.add("positivity", ev.positive,
               f"{ev.method}: {ev.root_count} root(s), min end value {min(ev.lo_value, ev.hi_value)!r}")

    nf = build_normalized(f, profile, job.alpha_hint, job.beta_hint)
    xs = quasi_random_points(cert.interval, resample)
    worst = float(np.max(np.abs(nf.g.sample(xs) - cert.poly(xs))))
    report.add("residual", worst <= cert.eps_cert,
               f"max |g - poly| over {xs.size} points = {worst!r} vs eps_cert {cert.eps_cert!r}")
    return report
