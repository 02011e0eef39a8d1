"""Walk through the proof that K(x) <= K'(0) x on [0, 1].

Each stage of the pipeline is run by hand so the intermediate numbers are
visible; the last step does the same thing in one call and checks the
certificate independently.
"""

from minimaxproof import (
    EndpointProfile,
    Interval,
    assert_positive_on,
    build_normalized,
    infnorm,
    kurepa_constants,
    remez_minimax,
)
from minimaxproof.prover import ProofJob, expression_handle, prove_nonneg, verify_certificate

# K'(0) and K''(0) are integrals of exp(-t) log(t)^k / (t - 1).
consts = kurepa_constants()
print(f"K'(0)  = {consts.k_prime_0:.15f}")
print(f"K''(0) = {consts.k_double_prime_0:.15f}")
print(f"alpha  = -K''(0)/2 = {consts.alpha:.15f}")

# f(x) = K'(0) x - K(x) vanishes to second order at 0, so divide by x^2.
f = expression_handle("KP0*x - kurepaK(x)")
profile = EndpointProfile(Interval(0.0, 1.0), n=2, m=0)
nf = build_normalized(f, profile)
print(f"\ng(0) = {nf.alpha:.15f} ({nf.alpha_method}), g(1) = {nf.beta:.15f} ({nf.beta_method})")

# Degree-1 minimax approximation of g.
res = remez_minimax(nf.g, profile.iv, 1)
c0, c1 = res.poly.coeffs
print(f"P1(x) = {c1:.9f} x + {c0:.9f}, eps = {res.err:.6f} after {res.iterations} exchanges")
print(f"independent sup-norm estimate on a fresh grid: {infnorm(nf.g, res.poly, profile.iv, 6143):.6f}")

# P1 - eps > 0 on [0, 1] in exact rational arithmetic.
ev = assert_positive_on(res.poly, profile.iv, 1.05 * res.err)
print(f"P1 - 1.05 eps > 0: {ev.positive} ({ev.method}, min end value {min(ev.lo_value, ev.hi_value):.6f})")

# All of the above in one call, plus an independent re-check of the certificate.
cert = prove_nonneg(ProofJob(expr="KP0*x - kurepaK(x)", n=2))
report = verify_certificate(cert.to_json(), resample=4096)
print(f"\nverdict: {cert.verdict}")
print("\n".join(report.lines()))
