import math

import numpy as np
import pytest
from scipy.special import gamma as sp_gamma

from minimaxproof.errors import DomainError
from minimaxproof.specfun import (
    QuadratureSettings,
    gamma_fn,
    kurepa_K,
    kurepa_K_check,
    kurepa_K_mp,
    kurepa_constants,
    kurepa_deriv0,
    tail_cutoff,
)

XS = ["0.1", "0.2", "0.3", "0.4", "0.5", "0.6", "0.7", "0.8", "0.9"]


def test_kurepa_matches_oracle(kurepa_oracle):
    for key, ref in kurepa_oracle["K"].items():
        assert abs(kurepa_K(float(key)) - float(ref)) <= 1e-12, key


def test_kurepa_vectorized_equals_scalar():
    xs = np.array([0.05, 0.5, 0.95])
    vec = kurepa_K(xs)
    for x, v in zip(xs, vec):
        assert v == pytest.approx(kurepa_K(float(x)), rel=1e-13)


def test_kurepa_end_values():
    # K(0) = 0 and K(1) = 1
    assert kurepa_K(0.0) == 0.0
    assert kurepa_K(1.0) == pytest.approx(1.0, abs=1e-14)


def test_kurepa_domain():
    with pytest.raises(DomainError):
        kurepa_K(-0.5)
    with pytest.raises(DomainError):
        kurepa_K(1.5)


def test_closed_form_route(kurepa_oracle):
    for key in XS:
        assert abs(kurepa_K_check(float(key)) - float(kurepa_oracle["K"][key])) <= 1e-12


def test_extended_route(kurepa_oracle):
    v = kurepa_K_mp(0.5, 30)
    assert abs(float(v) - float(kurepa_oracle["K"]["0.5"])) <= 1e-20


def test_derivative_constants(kurepa_oracle):
    assert kurepa_deriv0(1) == pytest.approx(float(kurepa_oracle["K_prime_0"]), abs=1e-13)
    assert kurepa_deriv0(2) == pytest.approx(float(kurepa_oracle["K_double_prime_0"]), abs=1e-12)
    c = kurepa_constants()
    assert c.alpha == pytest.approx(float(kurepa_oracle["alpha"]), abs=1e-12)
    assert c.alpha > 0


def test_quadrature_error_is_reported():
    val, err = kurepa_K(0.3, full_output=True)
    assert 0 <= err <= 1e-12


def test_tail_cutoff_meets_tolerance():
    for tol in (1e-10, 1e-15, 1e-25):
        T = tail_cutoff(tol)
        assert math.exp(-T) * (math.log(T) + 1 / T + 1) <= tol / 10


def test_halved_settings():
    q = QuadratureSettings().halved()
    assert q.abs_tol == QuadratureSettings().abs_tol / 2


@pytest.mark.parametrize("x", [0.01, 0.5, 1.0, 2.5, 7.0])
def test_gamma_matches_scipy(x):
    assert gamma_fn(x) == pytest.approx(float(sp_gamma(x)), rel=1e-14)


def test_gamma_domain():
    with pytest.raises(DomainError):
        gamma_fn(0.0)
