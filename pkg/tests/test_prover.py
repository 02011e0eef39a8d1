import json

import pytest

from minimaxproof.casebook import CASES
from minimaxproof.errors import CertificateError
from minimaxproof.prover import (
    INCONCLUSIVE,
    PROVED,
    REFUTED,
    ProofCertificate,
    ProofJob,
    dumps,
    prove_nonneg,
    quasi_random_points,
    verify_certificate,
)
from minimaxproof.polycore import Interval

TH1 = CASES["theorem1_kurepa"].jobs[0]
LEMMA = CASES["lemma_gamma_lower"].jobs[0]


@pytest.fixture(scope="module")
def th1_cert():
    return prove_nonneg(TH1)


@pytest.fixture(scope="module")
def lemma_cert():
    return prove_nonneg(LEMMA)


def test_job_validation():
    with pytest.raises(ValueError):
        ProofJob(expr="x", degree=-1)
    with pytest.raises(ValueError):
        ProofJob(expr="x", safety_factor=0.9)
    with pytest.raises(ValueError):
        ProofJob(expr="x", grid_precision="quad")


def test_theorem1_certificate(th1_cert):
    c = th1_cert
    assert c.verdict == PROVED
    assert c.eps_cert == pytest.approx(1.05 * c.eps_raw, rel=1e-15)
    assert c.residual_check <= c.eps_cert
    assert c.positivity.positive and c.positivity.method == "endpoint-linear"
    assert c.remez["converged"]


def test_json_is_deterministic_except_timestamp(th1_cert):
    again = prove_nonneg(TH1)
    a, b = th1_cert.to_dict(), again.to_dict()
    a.pop("timestamp"), b.pop("timestamp")
    assert dumps(a) == dumps(b)


def test_floats_keep_seventeen_digits(th1_cert):
    text = th1_cert.to_json()
    back = ProofCertificate.from_json(text)
    assert back.poly.coeffs == th1_cert.poly.coeffs
    assert back.eps_raw == th1_cert.eps_raw
    assert dumps(0.1) == "0.10000000000000001"
    assert dumps(float("nan")) == "null"


def test_round_trip_verifies(th1_cert, lemma_cert):
    for cert in (th1_cert, lemma_cert):
        report = verify_certificate(cert.to_json(), resample=4096)
        assert report.passed, report.lines()


def _tampered(cert, path, fn):
    d = json.loads(cert.to_json())
    node = d
    for k in path[:-1]:
        node = node[k]
    node[path[-1]] = fn(node[path[-1]])
    return d


@pytest.mark.parametrize("path, fn", [
    (("eps_cert",), lambda v: v * 0.5),
    (("eps_raw",), lambda v: v * 1.5),
    (("poly", "coeffs", 0), lambda v: v + 0.01),
    (("poly", "coeffs", 1), lambda v: v * 1.02),
    (("normalized", "b"), lambda v: v * 0.9),
    (("normalized", "a"), lambda v: v + 0.05),
    (("normalized", "alpha"), lambda v: v * 1.01),
])
def test_tampering_is_detected(th1_cert, path, fn):
    report = verify_certificate(_tampered(th1_cert, path, fn))
    assert not report.passed


def test_consistent_eps_shrink_is_detected(th1_cert):
    d = json.loads(th1_cert.to_json())
    d["eps_raw"] *= 0.9
    d["eps_cert"] = d["eps_raw"] * d["job"]["safety_factor"]
    report = verify_certificate(d, resample=4096)
    failed = [name for name, ok, _ in report.checks if not ok]
    assert failed == ["residual"]


@pytest.mark.parametrize("mutate, field", [
    (lambda d: d.pop("verdict"), "verdict"),
    (lambda d: d["poly"].update(degree=3), "poly.degree"),
    (lambda d: d["poly"]["coeffs"].__setitem__(1, "x"), "poly.coeffs[1]"),
    (lambda d: d.update(schema="cert-v0"), "schema"),
    (lambda d: d["normalized"].update(n=1), "normalized.n"),
    (lambda d: d["job"].pop("expr"), "job.expr"),
    (lambda d: d.update(eps_cert=None), "eps_cert"),
])
def test_structural_errors_name_the_field(th1_cert, mutate, field):
    d = json.loads(th1_cert.to_json())
    mutate(d)
    with pytest.raises(CertificateError) as info:
        verify_certificate(d)
    assert info.value.path == field


def test_not_json():
    with pytest.raises(CertificateError):
        verify_certificate("{not json")


def test_refutation_certificates_verify():
    for job in (ProofJob(expr="-x", n=1), ProofJob(expr="(x - 1/2)^2 - 1/100", degree=2)):
        cert = prove_nonneg(job)
        assert cert.verdict == REFUTED
        assert verify_certificate(cert.to_json()).passed


def test_inconclusive_when_degree_too_low():
    # lemma at degree 1: eps too large for P1 - eps > 0, but no negative sample
    cert = prove_nonneg(ProofJob(expr="(x+2)*gamma(x+1) - 9/5", degree=1))
    assert cert.verdict == INCONCLUSIVE and cert.witness is None


def test_quasi_random_points_cover_interval():
    xs = quasi_random_points(Interval(0.0, 2.0), 1000)
    assert xs[0] == 0.0 and xs[-1] == 2.0 and xs.size == 1002
    assert max(abs(x - 1.0) for x in xs) > 0.99 and min(abs(x - 1.0) for x in xs) < 1e-2
