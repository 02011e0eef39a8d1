import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from minimaxproof.errors import IndeterminateError
from minimaxproof.polycore import (
    Interval,
    Polynomial,
    assert_positive_on,
    count_real_roots,
    differentiate,
    eval_poly,
    rationalize_down,
    sturm_sequence,
)


def test_interval_validation():
    with pytest.raises(ValueError):
        Interval(1.0, 1.0)
    with pytest.raises(ValueError):
        Interval(0.0, math.inf)
    iv = Interval(-1.0, 3.0)
    assert iv.width == 4.0 and iv.mid == 1.0


def test_polynomial_trims_and_evaluates():
    p = Polynomial([1.0, 2.0, 0.0, 0.0])
    assert p.degree == 1
    assert eval_poly(p, 2.0) == 5.0
    np.testing.assert_allclose(p(np.array([0.0, 1.0])), [1.0, 3.0])
    assert Polynomial([0.0, 0.0]).is_zero
    assert differentiate(Polynomial([1.0, 2.0, 3.0])).coeffs == (2.0, 6.0)


@pytest.mark.parametrize("coeffs, iv, expected", [
    ([1.0, 0.0, 1.0], (-2.0, 2.0), 0),        # x^2 + 1
    ([-0.25, 0.0, 1.0], (-1.0, 1.0), 2),      # x^2 - 1/4
    ([-0.5, 1.0], (0.0, 1.0), 1),             # x - 1/2
    ([0.0, -1.0, 0.0, 1.0], (-2.0, 2.0), 3),  # x^3 - x
])
def test_count_real_roots(coeffs, iv, expected):
    assert count_real_roots(Polynomial(coeffs), Interval(*iv)) == expected


def test_double_root_counts_once():
    # (x - 1/2)^2: Sturm counts distinct roots
    assert count_real_roots(Polynomial([0.25, -1.0, 1.0]), Interval(0.0, 1.0)) == 1


def test_zero_polynomial_is_indeterminate():
    with pytest.raises(IndeterminateError):
        count_real_roots(Polynomial([0.0]), Interval(0.0, 1.0))


def test_sturm_chain_ends_in_constant():
    chain = sturm_sequence([Fraction(-1), Fraction(0), Fraction(1)])
    assert len(chain[-1]) == 1


def test_rationalize_down_bounds_error():
    p = Polynomial([0.1, -0.3, 0.7])
    fracs, slack = rationalize_down(p, 2.0)
    for x in (Fraction(-2), Fraction(1, 3), Fraction(2)):
        exact = sum(Fraction(c) * x ** i for i, c in enumerate(p.coeffs))
        approx = sum(q * x ** i for i, q in enumerate(fracs))
        assert 0 <= exact - approx <= slack


def test_paper_polynomials_are_positive():
    th1 = Polynomial([0.921004887, -0.531115454])
    assert assert_positive_on(th1, Interval(0.0, 1.0), 0.04232).positive
    th2 = Polynomial([0.000543606, 0.000410754])
    assert assert_positive_on(th2, Interval(0.0, math.pi / 2), 1.408e-5).positive


def test_negative_somewhere_is_rejected():
    ev = assert_positive_on(Polynomial([-0.5, 1.0]), Interval(0.0, 1.0))
    assert not ev.positive and ev.method == "endpoint-linear"
    # positive at both ends, dips below zero inside
    ev = assert_positive_on(Polynomial([0.2, -1.0, 1.0]), Interval(0.0, 1.0))
    assert not ev.positive and ev.root_count == 2


def test_slack_must_be_nonnegative():
    with pytest.raises(ValueError):
        assert_positive_on(Polynomial([1.0]), Interval(0.0, 1.0), -1.0)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-8, 8), min_size=1, max_size=4, unique=True))
def test_planted_roots_are_counted(roots):
    # product of (x - r/4): distinct rational roots, all inside [-3, 3]
    coeffs = [Fraction(1)]
    for r in roots:
        c = Fraction(r, 4)
        nxt = [Fraction(0)] * (len(coeffs) + 1)
        for i, a in enumerate(coeffs):
            nxt[i] -= a * c
            nxt[i + 1] += a
        coeffs = nxt
    p = Polynomial([float(c) for c in coeffs])   # exact: dyadic values
    assert count_real_roots(p, Interval(-3.0, 3.0)) == len(roots)
