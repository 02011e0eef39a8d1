import math

import mpmath as mp
import numpy as np
import pytest

from minimaxproof.errors import ConvergenceError, EvaluationError
from minimaxproof.minimax import (
    FunctionHandle,
    RemezOptions,
    chebyshev_reference,
    equioscillation_report,
    infnorm,
    remez_minimax,
)
from minimaxproof.polycore import Interval, Polynomial


def abs_oracle(steps=401):
    """Brute-force best line for |x| on [-1, 1]: grid search over (slope, intercept)."""
    xs = np.linspace(-1.0, 1.0, 2001)
    fx = np.abs(xs)
    best = (math.inf, None, None)
    for c1 in np.linspace(-0.5, 0.5, steps):
        for c0 in np.linspace(0.0, 1.0, steps):
            e = np.max(np.abs(fx - c0 - c1 * xs))
            if e < best[0]:
                best = (e, c0, c1)
    return best


def test_abs_degree1_matches_brute_force():
    err, c0, c1 = abs_oracle()
    r = remez_minimax(FunctionHandle.from_numpy(np.abs, "|x|"), Interval(-1.0, 1.0), 1)
    assert r.err == pytest.approx(err, abs=1e-3)
    assert r.poly(0.0) == pytest.approx(c0, abs=1e-3)
    got_slope = r.poly.coeffs[1] if r.poly.degree >= 1 else 0.0
    assert got_slope == pytest.approx(c1, abs=1e-3)
    assert (err, c0, c1) == pytest.approx((0.5, 0.5, 0.0), abs=1e-3)


def test_exp_degree_one_classical():
    # best line for e^x on [0, 1]: slope e - 1, error known in closed form
    r = remez_minimax(FunctionHandle(mp.exp, "exp"), Interval(0.0, 1.0), 1)
    s = math.e - 1
    # equal and opposite errors at 0, log(s) and 1
    expected = (2 - math.e + s * math.log(s)) / 2
    assert r.poly.coeffs[1] == pytest.approx(s, rel=1e-9)
    assert r.err == pytest.approx(expected, rel=1e-9)
    rep = equioscillation_report(r)
    assert rep.passed and rep.alternations == 3


def test_exact_fit_is_flagged():
    p = Polynomial([1.0, -2.0, 0.5])
    r = remez_minimax(FunctionHandle.from_numpy(p), Interval(0.0, 2.0), 3)
    assert r.exact and r.err <= 1e-12


def test_chebyshev_reference_endpoints():
    pts = chebyshev_reference(Interval(0.0, 2.0), 4)
    assert pts[0] == 0.0 and pts[-1] == 2.0 and pts == sorted(pts)


def test_infnorm_is_a_lower_bound_close_to_truth():
    f = FunctionHandle(mp.sin, "sin")
    p = Polynomial([0.0, 1.0])
    # max |sin x - x| on [0, 1] is at x = 1
    assert infnorm(f, p, Interval(0.0, 1.0)) == pytest.approx(1 - math.sin(1.0), rel=1e-12)
    # interior peak found by refinement
    q = Polynomial([0.0, 0.9])
    est = infnorm(f, q, Interval(0.0, 1.0))
    true = max(abs(math.sin(x) - 0.9 * x) for x in np.linspace(0, 1, 200001))
    assert true - 1e-9 <= est <= true + 1e-12 or est == pytest.approx(true, rel=1e-9)


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_nonfinite_function_is_an_error():
    f = FunctionHandle.from_numpy(lambda x: 1.0 / (x - 0.5), "pole")
    with pytest.raises(EvaluationError):
        remez_minimax(f, Interval(0.0, 1.0), 1)


def test_convergence_error_carries_best_iterate():
    f = FunctionHandle.from_numpy(np.abs, "|x|")
    with pytest.raises(ConvergenceError) as info:
        remez_minimax(f, Interval(-1.0, 1.0), 4, RemezOptions(max_iter=1, leveling_tol=1e-12))
    assert info.value.best is not None and not info.value.best.converged


@pytest.mark.parametrize("degree", range(7))
def test_symmetric_function_any_degree(degree):
    # |x| is even: the symmetric start reference is degenerate for even degree
    r = remez_minimax(FunctionHandle.from_numpy(np.abs, "|x|"), Interval(-1.0, 1.0), degree)
    assert equioscillation_report(r).passed
