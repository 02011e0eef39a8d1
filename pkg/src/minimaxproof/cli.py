"""Command-line front end.

    minimaxproof prove JOBFILE [--out CERT]
    minimaxproof verify CERTFILE [--resample N]
    minimaxproof approx JOBFILE
    minimaxproof eval EXPR X
    minimaxproof casebook [NAME] [--out REPORT] [--jobs N]
    minimaxproof list

Exit codes: 0 proved / pass, 1 usage, parse or evaluation error,
2 refuted-candidate, 3 inconclusive, 4 verification failure.
"""

from __future__ import annotations

import argparse
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

from . import __version__
from .errors import MinimaxProofError, ParseError
from .prover import INCONCLUSIVE, PROVED, REFUTED, ProofJob, dumps, prove_nonneg, verify_certificate

EXIT_OK, EXIT_ERROR, EXIT_REFUTED, EXIT_INCONCLUSIVE, EXIT_VERIFY_FAIL = 0, 1, 2, 3, 4
VERDICT_EXIT = {PROVED: EXIT_OK, REFUTED: EXIT_REFUTED, INCONCLUSIVE: EXIT_INCONCLUSIVE}

JOB_KEYS = ("expr", "a", "b", "n", "m", "degree", "alpha_hint", "beta_hint", "precision", "safety_factor")
_INT_KEYS = {"n", "m", "degree", "precision"}
_FLOAT_KEYS = {"safety_factor"}
_KEY_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


def fmt(x) -> str:
    return format(float(x), ".17g")


@dataclass
class JobFileError(Exception):
    message: str
    line: int
    column: int

    def __str__(self):
        return f"line {self.line}, column {self.column}: {self.message}"


def _value(raw: str, line: int, col: int) -> str:
    raw = raw.strip()
    if raw[:1] in "\"'":
        q = raw[0]
        end = raw.find(q, 1)
        if end < 0:
            raise JobFileError("unterminated string", line, col - 1)
        rest = raw[end + 1:].strip()
        if rest and not rest.startswith("#"):
            raise JobFileError("unexpected text after string", line, col + end + 1)
        return raw[1:end]
    return raw.split("#", 1)[0].strip()


def parse_job_text(text: str) -> ProofJob:
    """Parse a flat ``key = value`` job file (TOML-style; ``#`` comments).

    Strings may be quoted; unquoted values run to the end of the line.
    """
    seen: dict = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        indent = len(line) - len(line.lstrip())
        if "=" not in line:
            raise JobFileError("expected 'key = value'", lineno, indent + 1)
        key_part, raw = line.split("=", 1)
        key = key_part.strip()
        if not _KEY_RE.fullmatch(key):
            raise JobFileError(f"invalid key {key!r}", lineno, indent + 1)
        if key not in JOB_KEYS:
            raise JobFileError(f"unknown key {key!r} (allowed: {', '.join(JOB_KEYS)})", lineno, indent + 1)
        if key in seen:
            raise JobFileError(f"duplicate key {key!r}", lineno, indent + 1)
        after = len(key_part) + 1
        vcol = after + len(raw) - len(raw.lstrip()) + 1
        if raw.strip()[:1] in "\"'":
            vcol += 1          # columns point inside the quotes
        val = _value(raw, lineno, vcol)
        if val == "":
            raise JobFileError(f"missing value for {key!r}", lineno, vcol)
        try:
            if key in _INT_KEYS:
                seen[key] = int(val)
            elif key in _FLOAT_KEYS:
                seen[key] = float(val)
            elif key in ("a", "b"):
                try:
                    seen[key] = float(val)
                except ValueError:
                    seen[key] = val
            else:
                seen[key] = val
        except ValueError:
            raise JobFileError(f"{key!r} expects a number, got {val!r}", lineno, vcol) from None
        seen.setdefault("_lines", {})[key] = (lineno, vcol)
    lines = seen.pop("_lines", {})
    if "expr" not in seen:
        raise JobFileError("missing required key 'expr'", 1, 1)
    _check_exprs(seen, lines)
    try:
        return ProofJob(**seen)
    except ValueError as exc:
        raise JobFileError(str(exc), 1, 1) from None


def _check_exprs(fields: dict, lines: dict):
    from .exprlang import parse_expr

    for key in ("expr", "a", "b", "alpha_hint", "beta_hint"):
        v = fields.get(key)
        if isinstance(v, str):
            try:
                parse_expr(v)
            except ParseError as exc:
                line, col = lines[key]
                raise JobFileError(f"in {key}: {exc.message}", line, col + exc.position) from None


def load_job(path: str) -> ProofJob:
    with open(path, encoding="utf-8") as fh:
        return parse_job_text(fh.read())


def _apply_overrides(job: ProofJob, args) -> ProofJob:
    changes = {}
    if getattr(args, "precision", None) is not None:
        changes["precision"] = args.precision
    if getattr(args, "degree", None) is not None:
        changes["degree"] = args.degree
    if getattr(args, "safety_factor", None) is not None:
        changes["safety_factor"] = args.safety_factor
    return replace(job, **changes) if changes else job


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _cmd_prove(args) -> int:
    job = _apply_overrides(load_job(args.jobfile), args)
    cert = prove_nonneg(job)
    _emit(cert.to_json(), args.out)
    print(f"verdict: {cert.verdict}", file=sys.stderr)
    if cert.eps_raw is not None:
        print(f"eps_raw: {fmt(cert.eps_raw)}  eps_cert: {fmt(cert.eps_cert)}", file=sys.stderr)
    return VERDICT_EXIT[cert.verdict]


def _cmd_verify(args) -> int:
    with open(args.certfile, encoding="utf-8") as fh:
        text = fh.read()
    report = verify_certificate(text, resample=args.resample)
    for line in report.lines():
        print(line)
    print("result: " + ("pass" if report.passed else "fail"))
    return EXIT_OK if report.passed else EXIT_VERIFY_FAIL


def _cmd_approx(args) -> int:
    from .minimax import remez_minimax
    from .prover import normalize_job

    job = _apply_overrides(load_job(args.jobfile), args)
    nf = normalize_job(job)
    res = remez_minimax(nf.g, nf.profile.iv, job.degree)
    print(f"alpha: {fmt(nf.alpha)} ({nf.alpha_method})")
    print(f"beta: {fmt(nf.beta)} ({nf.beta_method})")
    print("coeffs (x^0 first): " + ", ".join(fmt(c) for c in res.poly.coeffs))
    print(f"eps: {fmt(res.err)}")
    print(f"iterations: {res.iterations}  spread_ratio: {fmt(res.spread_ratio)}")
    return EXIT_OK


def _cmd_eval(args) -> int:
    from .exprlang import evaluate_text

    try:
        x = float(args.x)
    except ValueError:
        x = evaluate_text(args.x, 0.0, args.precision or 30)
    print(fmt(evaluate_text(args.expr, x, args.precision or 30)))
    return EXIT_OK


def _run_named_case(name: str):
    from .casebook import run_case

    return run_case(name)


def _cmd_casebook(args) -> int:
    from .casebook import list_cases

    names = [args.name] if args.name else list_cases()
    if args.name and args.name not in list_cases():
        raise KeyError(f"unknown case {args.name!r}; known: {', '.join(list_cases())}")
    if args.jobs > 1 and len(names) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            reports = list(pool.map(_run_named_case, names))
    else:
        reports = [_run_named_case(n) for n in names]
    reports.sort(key=lambda r: r.name)
    for r in reports:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.name} ({r.seconds:.1f} s)")
        for row in r.table:
            exp, act = row["expected"], row["actual"]
            exp = fmt(exp) if isinstance(exp, float) else exp
            act = fmt(act) if isinstance(act, float) else act
            print(f"    job {row['job']} {row['key']}: expected {exp} actual {act} "
                  f"[{row['tolerance'] or 'exact'}] {'ok' if row['ok'] else 'MISMATCH'}")
    if args.out:
        body = [r.to_dict() for r in reports]
        _emit(dumps(body[0] if len(body) == 1 else body), args.out)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_INCONCLUSIVE


def _cmd_list(args) -> int:
    from .casebook import CASES

    for name, spec in CASES.items():
        print(f"{name}\t{len(spec.jobs)} job(s)\t{spec.description}")
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_ERROR)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="minimaxproof", description="Numerical proofs of f(x) >= 0 on [a, b].")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def overrides(sp):
        sp.add_argument("--precision", type=int, help="decimal digits for extended evaluation")
        sp.add_argument("--degree", type=int, help="minimax polynomial degree")
        sp.add_argument("--safety-factor", type=float, dest="safety_factor")

    sp = sub.add_parser("prove", help="prove a job file and print its certificate")
    sp.add_argument("jobfile")
    sp.add_argument("--out", help="write the certificate here instead of stdout")
    overrides(sp)
    sp.set_defaults(func=_cmd_prove)

    sp = sub.add_parser("verify", help="re-check a certificate")
    sp.add_argument("certfile")
    sp.add_argument("--resample", type=int, default=4096)
    sp.set_defaults(func=_cmd_verify)

    sp = sub.add_parser("approx", help="Remez only: print polynomial and error")
    sp.add_argument("jobfile")
    overrides(sp)
    sp.set_defaults(func=_cmd_approx)

    sp = sub.add_parser("eval", help="evaluate an expression at x")
    sp.add_argument("expr")
    sp.add_argument("x")
    sp.add_argument("--precision", type=int)
    sp.set_defaults(func=_cmd_eval)

    sp = sub.add_parser("casebook", help="run one or all built-in cases")
    sp.add_argument("name", nargs="?")
    sp.add_argument("--out", help="write the JSON report here")
    sp.add_argument("--jobs", type=int, default=1, help="cases to run in parallel")
    sp.set_defaults(func=_cmd_casebook)

    sp = sub.add_parser("list", help="list built-in cases")
    sp.set_defaults(func=_cmd_list)
    return p


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_ERROR
    try:
        return args.func(args)
    except JobFileError as exc:
        print(f"error: {getattr(args, 'jobfile', '')}: {exc}", file=sys.stderr)
    except (MinimaxProofError, OSError, KeyError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
    return EXIT_ERROR


def main():
    sys.exit(run_cli())
