"""Gamma, Kurepa's K(x) on [0, 1], and the constants K'(0), K''(0).

Kurepa's function is

    K(x) = int_0^inf exp(-t) (t**x - 1) / (t - 1) dt.

The primary route is an adaptive Gauss-Kronrod (G7/K15) quadrature in double
precision that is vectorized over ``x``: a single adaptive partition of the
t-axis is refined until *every* requested ``x`` meets its tolerance, which
makes dense grids of K cheap.  The removable singularity at t = 1 is handled
by a mandatory split there plus a truncated power series for |t - 1| < 1e-3,
and the infinite tail is cut at a T whose tail bound is below abs_tol / 10.

``kurepa_K_mp`` evaluates the same integral in mpmath at a requested decimal
precision (used as the extended-precision backend), and ``kurepa_K_check``
evaluates the closed form through Ei and the upper incomplete gamma function
as an independent cross-check.
"""

from __future__ import annotations

import functools
import heapq
import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import mpmath as mp
import numpy as np

from .errors import DomainError, EvaluationError, QuadratureError

# Gauss-Kronrod 15-point nodes (positive half) and weights, with the
# embedded 7-point Gauss weights at the odd-indexed nodes.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])          # 15 nodes, ascending
_KW = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GW = np.zeros(15)
_GW[1:14:2] = np.concatenate([_WG[:-1], _WG[::-1]])

SERIES_RADIUS = 1e-3
_SERIES_TERMS = 8


@dataclass(frozen=True)
class QuadratureSettings:
    # relative accuracy matters: f(x)/x**n divides out tiny values of K near 0
    abs_tol: float = 1e-25
    rel_tol: float = 1e-14
    max_subdivisions: int = 4000
    split_points: tuple = (1.0,)

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("quadrature tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")
        if any(p <= 0 for p in self.split_points):
            raise ValueError("split points must lie inside (0, inf)")

    def halved(self) -> QuadratureSettings:
        return QuadratureSettings(self.abs_tol / 2, self.rel_tol / 2,
                                  self.max_subdivisions * 2, self.split_points)


@dataclass(frozen=True)
class KurepaConstants:
    k_prime_0: float
    k_double_prime_0: float
    alpha: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "alpha", -self.k_double_prime_0 / 2)


class QuadResult(NamedTuple):
    value: np.ndarray
    error: np.ndarray
    subdivisions: int


def tail_cutoff(abs_tol: float) -> float:
    """Smallest T (to 1e-3) with exp(-T) (ln T + 1/T + 1) <= abs_tol / 10."""
    target = abs_tol / 10
    T = 2.0
    while math.exp(-T) * (math.log(T) + 1 / T + 1) > target:
        T += 0.5
    return T


def adaptive_gk(func: Callable[[np.ndarray], np.ndarray], breakpoints, settings: QuadratureSettings,
                ncomp: int) -> QuadResult:
    """Adaptive G7/K15 quadrature of a vector-valued integrand.

    ``func(t)`` maps a 1-d array of nodes to an array of shape
    ``(len(t), ncomp)``.  Subintervals are bisected, worst first, until
    the summed error estimate of every component is within
    ``max(abs_tol, rel_tol * |value|)``.
    """

    def rule(a, b):
        half, mid = 0.5 * (b - a), 0.5 * (a + b)
        vals = func(mid + half * _NODES)
        k = half * (_KW @ vals)
        g = half * (_GW @ vals)
        return k, np.abs(k - g)

    heap = []
    total = np.zeros(ncomp)
    err = np.zeros(ncomp)
    counter = 0
    first = []
    for a, b in zip(breakpoints[:-1], breakpoints[1:]):
        k, e = rule(a, b)
        total += k
        err += e
        first.append((a, b, k, e))
    tol = np.maximum(settings.abs_tol, settings.rel_tol * np.abs(total))
    for a, b, k, e in first:
        heapq.heappush(heap, (-float((e / tol).max()), counter, a, b, k, e))
        counter += 1

    nsub = len(heap)
    while True:
        tol = np.maximum(settings.abs_tol, settings.rel_tol * np.abs(total))
        if np.all(err <= tol):
            return QuadResult(total, err, nsub)
        if nsub >= settings.max_subdivisions:
            raise QuadratureError(
                f"quadrature tolerance not reached within {settings.max_subdivisions} subdivisions",
                estimate=total, error_bound=err)
        # pick the worst interval relative to the current tolerance
        _, _, a, b, k, e = heapq.heappop(heap)
        m = 0.5 * (a + b)
        k1, e1 = rule(a, m)
        k2, e2 = rule(m, b)
        total += k1 + k2 - k
        err += e1 + e2 - e
        for lo, hi, kk, ee in ((a, m, k1, e1), (m, b, k2, e2)):
            heapq.heappush(heap, (-float((ee / tol).max()), counter, lo, hi, kk, ee))
            counter += 1
        nsub += 1


# -- integrands ---------------------------------------------------------------

def _kurepa_ratio(t: np.ndarray, x: np.ndarray) -> np.ndarray:
    """(t**x - 1) / (t - 1) on a (nodes, xs) grid, series near t = 1."""
    T = t[:, None]
    X = x[None, :]
    s = T - 1.0
    near = np.abs(s) < SERIES_RADIUS
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = np.expm1(X * np.log(T)) / s
    if near.any():
        # binomial series sum_k C(x, k) s**(k-1)
        coef = np.broadcast_to(X, direct.shape).astype(float)
        acc = coef.copy()
        spow = np.ones_like(direct)
        for k in range(1, _SERIES_TERMS):
            coef = coef * (X - k) / (k + 1)
            spow = spow * s
            acc = acc + coef * spow
        direct = np.where(near, acc, direct)
    return direct


def _log_ratio(t: np.ndarray, power: int) -> np.ndarray:
    """log(t)**power / (t - 1), series near t = 1."""
    s = t - 1.0
    near = np.abs(s) < SERIES_RADIUS
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = np.log(t) ** power / s
    if near.any():
        # log1p(s)/s = sum (-1)**k s**k / (k+1)
        ser = np.zeros_like(s)
        spow = np.ones_like(s)
        for k in range(_SERIES_TERMS):
            ser += (-1) ** k * spow / (k + 1)
            spow = spow * s
        approx = ser if power == 1 else s * ser * ser
        direct = np.where(near, approx, direct)
    return direct


def _breakpoints(settings: QuadratureSettings) -> list:
    T = tail_cutoff(settings.abs_tol)
    pts = sorted({0.0, T, *[p for p in settings.split_points if p < T]})
    return pts


# -- public API -----------------------------------------------------------------

def gamma_fn(x: float) -> float:
    """Gamma function for real x > 0 (CPython's Lanczos implementation)."""
    if not x > 0:
        raise DomainError(f"gamma_fn is restricted to x > 0, got {x}")
    return math.gamma(x)


def kurepa_K(x, q: QuadratureSettings | None = None, full_output: bool = False):
    """Kurepa's K(x) for 0 <= x <= 1 by adaptive quadrature.

    ``x`` may be a scalar or an array; arrays share one adaptive partition.
    With ``full_output`` the return is ``(value, error_bound)``.
    """
    q = q or QuadratureSettings()
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if xs.ndim != 1 or np.any(~np.isfinite(xs)) or np.any(xs < 0) or np.any(xs > 1):
        raise DomainError("kurepa_K is implemented for 0 <= x <= 1 only")
    res = adaptive_gk(lambda t: np.exp(-t)[:, None] * _kurepa_ratio(t, xs),
                      _breakpoints(q), q, xs.size)
    value, err = res.value, res.error
    if np.ndim(x) == 0:
        value, err = float(value[0]), float(err[0])
    return (value, err) if full_output else value


def kurepa_deriv0(order: int, q: QuadratureSettings | None = None, full_output: bool = False):
    """K'(0) (order 1) or K''(0) (order 2).

    K^(k)(0) = int_0^inf exp(-t) log(t)**k / (t - 1) dt, so K'(0) > 0 and
    K''(0) < 0; the constant alpha of the first Kurepa inequality is
    -K''(0) / 2.
    """
    if order not in (1, 2):
        raise ValueError(f"order must be 1 or 2, got {order}")
    q = q or QuadratureSettings()
    res = adaptive_gk(lambda t: (np.exp(-t) * _log_ratio(t, order))[:, None],
                      _breakpoints(q), q, 1)
    value, err = float(res.value[0]), float(res.error[0])
    return (value, err) if full_output else value


def kurepa_constants(q: QuadratureSettings | None = None) -> KurepaConstants:
    return KurepaConstants(kurepa_deriv0(1, q), kurepa_deriv0(2, q))


def _mp_kurepa_integrand(x):
    def f(t):
        if t == 1:
            return mp.exp(-t) * x
        return mp.exp(-t) * mp.expm1(x * mp.log(t)) / (t - 1)
    return f


def kurepa_K_mp(x, dps: int | None = None):
    """K(x) in mpmath at ``dps`` decimal digits (tanh-sinh, split at t = 1)."""
    with mp.workdps((dps or mp.mp.dps) + 5):
        x = mp.mpf(x)
        if x < 0 or x > 1:
            raise DomainError(f"kurepa_K is implemented for 0 <= x <= 1 only, got {x}")
        if x == 0:
            return mp.mpf(0)
        val = mp.quad(_mp_kurepa_integrand(x), [0, 1, mp.inf])
    return +val


@functools.lru_cache(maxsize=None)
def _kp0_cached(dps: int):
    with mp.workdps(dps + 10):
        val = mp.quad(lambda t: mp.exp(-t) * (1 if t == 1 else mp.log(t) / (t - 1)),
                      [0, 1, mp.inf])
    return val


def kp0_mp(dps: int | None = None):
    """K'(0) in extended precision, computed once per precision and cached."""
    dps = max(int(dps or mp.mp.dps), 30)
    # round the cache key up so nearby precisions share an entry
    return +_kp0_cached(((dps + 19) // 20) * 20)


def kurepa_K_check(x, full_output: bool = False, imag_tol: float = 1e-8):
    """K(x) from the closed form via Ei(1) and Gamma(-x, -1).

        K(x) = (Ei(1) + i pi)/e + (-1)**x Gamma(1 + x) Gamma(-x, -1) / e

    with (-1)**x = exp(i pi x) on the principal branch.  The imaginary part
    of the result must vanish; its magnitude is returned with
    ``full_output`` and an imaginary residue above ``imag_tol`` raises.
    """
    x = float(x)
    if not 0 < x < 1:
        raise DomainError(f"kurepa_K_check requires 0 < x < 1, got {x}")
    with mp.workdps(30):
        z = mp.mpf(x)
        val = (mp.ei(1) + 1j * mp.pi) / mp.e \
            + mp.exp(1j * mp.pi * z) * mp.gamma(1 + z) * mp.gammainc(-z, -1) / mp.e
        re, im = float(mp.re(val)), float(abs(mp.im(val)))
    if im > imag_tol:
        raise EvaluationError(f"branch inconsistency: imaginary residue {im:.3e} at x = {x}")
    return (re, im) if full_output else re
