"""The arcsin upper bound phi_new and its place in the Shafer-Fink-Zhu chain.

The gap phi_new(x) - arcsin(x) vanishes to third order at x = 0 and has a
square-root singularity at x = 1.  Substituting x = sin t turns both ends
into polynomial-type roots: order 3 at t = 0 and order 1 at t = pi/2.
"""

from minimaxproof.casebook import (
    ASIN,
    PHINEW,
    TH2_ALPHA,
    TH2_BETA,
    run_case,
    t_domain,
)
from minimaxproof.exprlang import evaluate_text

print("t-domain gap:")
print("  " + t_domain(PHINEW, ASIN))

print(f"closed-form end values: alpha = {evaluate_text(TH2_ALPHA):.15e}, "
      f"beta = {evaluate_text(TH2_BETA):.15e}")

report = run_case("theorem2_arcsin")
cert = report.certificates[0]
print(f"\nRichardson end values: alpha = {cert.alpha:.15e}, beta = {cert.beta:.15e}")
c0, c1 = cert.poly.coeffs
print(f"P1(t) = {c1:.9f} t + {c0:.9f}, eps = {cert.eps_raw:.5g} -> {cert.verdict}")

# The new bound sits between arcsin and Zhu's bound; the paper checks the
# second step by algebra, here it is one more numerical proof.
report = run_case("chain_new_vs_zhu")
for cert in report.certificates:
    print(f"{cert.job.label}: {cert.verdict}, degree {cert.job.degree}, eps {cert.eps_raw:.3g}")
