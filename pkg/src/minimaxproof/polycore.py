"""Univariate polynomials, exact Sturm root counting, positivity certificates.

Coefficients are stored constant term first.  Everything that has to be
*decided* (root counts, positivity) is done over :class:`fractions.Fraction`
after a conservative rationalization of the floating-point coefficients, so
the only numerical uncertainty left in a proof is the approximation error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import IndeterminateError, InvalidIntervalError

# Coefficients are rounded down onto a dyadic grid this many bits below the
# largest coefficient before exact arithmetic.
RATIONAL_BITS = 60


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise InvalidIntervalError(f"interval endpoints must be finite, got [{lo}, {hi}]")
        if not lo < hi:
            raise InvalidIntervalError(f"interval needs lo < hi, got [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def __iter__(self):
        yield self.lo
        yield self.hi


@dataclass(frozen=True)
class Polynomial:
    """Real polynomial in the monomial basis, ``coeffs[i]`` multiplies x**i.

    Trailing zeros are dropped on construction; the zero polynomial is
    ``Polynomial([0.0])`` with degree 0.
    """

    coeffs: tuple = field(default=(0.0,))

    def __post_init__(self):
        cs = [float(c) for c in self.coeffs]
        while len(cs) > 1 and cs[-1] == 0.0:
            cs.pop()
        if not cs:
            cs = [0.0]
        object.__setattr__(self, "coeffs", tuple(cs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return self.degree == 0 and self.coeffs[0] == 0.0

    def __call__(self, x):
        return eval_poly(self, x)

    def derivative(self) -> Polynomial:
        return differentiate(self)

    def __sub__(self, other):
        if isinstance(other, (int, float)):
            cs = list(self.coeffs)
            cs[0] -= other
            return Polynomial(cs)
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0.0] * (n - len(self.coeffs))
        b = list(other.coeffs) + [0.0] * (n - len(other.coeffs))
        return Polynomial([u - v for u, v in zip(a, b)])

    def __repr__(self):
        return f"Polynomial({list(self.coeffs)!r})"


@dataclass(frozen=True)
class PositivityEvidence:
    """Outcome of :func:`assert_positive_on`.

    ``positive`` is the verdict.  It is True only when the rationalized
    ``p - slack - rational_slack`` has no root in (lo, hi] and is positive at
    lo, at hi and at ``sample_point``.
    """

    method: str  # "sturm-exact" or "endpoint-linear"
    positive: bool
    root_count: int
    sample_point: float
    sample_value: float
    rational_slack: float
    lo_value: float
    hi_value: float

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "positive": self.positive,
            "root_count": self.root_count,
            "sample_point": self.sample_point,
            "sample_value": self.sample_value,
            "rational_slack": self.rational_slack,
            "lo_value": self.lo_value,
            "hi_value": self.hi_value,
        }

    @classmethod
    def from_dict(cls, d: dict) -> PositivityEvidence:
        return cls(
            method=str(d["method"]),
            positive=bool(d["positive"]),
            root_count=int(d["root_count"]),
            sample_point=float(d["sample_point"]),
            sample_value=float(d["sample_value"]),
            rational_slack=float(d["rational_slack"]),
            lo_value=float(d["lo_value"]),
            hi_value=float(d["hi_value"]),
        )


def eval_poly(p: Polynomial, x):
    """Horner evaluation; ``x`` may be a float, an mpmath number or a numpy array."""
    cs = p.coeffs
    acc = np.full(np.shape(x), cs[-1]) if isinstance(x, np.ndarray) else cs[-1]
    for c in reversed(cs[:-1]):
        acc = acc * x + c
    return acc


def differentiate(p: Polynomial) -> Polynomial:
    if p.degree == 0:
        return Polynomial([0.0])
    return Polynomial([i * c for i, c in enumerate(p.coeffs) if i > 0])


# -- exact arithmetic -------------------------------------------------------

def _frac_eval(cs: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(cs):
        acc = acc * x + c
    return acc


def _frac_trim(cs: list) -> list:
    while len(cs) > 1 and cs[-1] == 0:
        cs.pop()
    return cs


def _frac_rem(a: list, b: list) -> list:
    """Remainder of a / b (lists of Fractions, constant first)."""
    r = list(a)
    db = len(b) - 1
    lead = b[-1]
    while len(r) - 1 >= db and any(r):
        q = r[-1] / lead
        shift = len(r) - 1 - db
        for i, bc in enumerate(b):
            r[shift + i] -= q * bc
        r.pop()
        if not r:
            return [Fraction(0)]
    return _frac_trim(r) if r else [Fraction(0)]


def _frac_deriv(cs: list) -> list:
    if len(cs) == 1:
        return [Fraction(0)]
    return [i * c for i, c in enumerate(cs) if i > 0]


def sturm_sequence(cs: Sequence[Fraction]) -> list:
    """Sturm chain p, p', -rem(p, p'), ... over the rationals."""
    p0 = _frac_trim([Fraction(c) for c in cs])
    if len(p0) == 1 and p0[0] == 0:
        raise IndeterminateError("indeterminate: Sturm sequence of the zero polynomial")
    chain = [p0]
    p1 = _frac_deriv(p0)
    while not (len(p1) == 1 and p1[0] == 0):
        chain.append(p1)
        r = _frac_rem(chain[-2], chain[-1])
        p1 = [-c for c in r]
    return chain


def _sign_variations(chain: list, x: Fraction) -> int:
    signs = [v > 0 for v in (_frac_eval(p, x) for p in chain) if v != 0]
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def _count_roots_exact(cs: Sequence[Fraction], lo: Fraction, hi: Fraction) -> int:
    chain = sturm_sequence(cs)
    return _sign_variations(chain, lo) - _sign_variations(chain, hi)


def count_real_roots(p: Polynomial, iv: Interval) -> int:
    """Number of distinct real roots of ``p`` in (lo, hi] by Sturm's theorem.

    Float coefficients are converted to fractions exactly, so for a given
    float polynomial the count is exact.
    """
    if p.is_zero():
        raise IndeterminateError("indeterminate: the zero polynomial has every point as a root")
    cs = [Fraction(c) for c in p.coeffs]
    return _count_roots_exact(cs, Fraction(iv.lo), Fraction(iv.hi))


def rationalize_down(p: Polynomial, radius: float, bits: int = RATIONAL_BITS):
    """Round coefficients down onto a dyadic grid.

    Returns ``(fracs, slack)`` where ``slack`` (a Fraction) bounds
    ``|p(x) - q(x)|`` for ``|x| <= radius``.
    """
    cmax = max(abs(c) for c in p.coeffs)
    if cmax == 0.0:
        return [Fraction(0)], Fraction(0)
    quantum = Fraction(2) ** (math.frexp(cmax)[1] - bits)
    fracs, slack = [], Fraction(0)
    R = Fraction(radius)
    for i, c in enumerate(p.coeffs):
        exact = Fraction(c)
        q = math.floor(exact / quantum) * quantum
        fracs.append(q)
        slack += (exact - q) * R ** i
    return fracs, slack


def _float_up(q: Fraction) -> float:
    f = float(q)
    return math.nextafter(f, math.inf) if Fraction(f) < q else f


def assert_positive_on(p: Polynomial, iv: Interval, slack: float = 0.0) -> PositivityEvidence:
    """Decide exactly whether ``p(x) - slack > 0`` for every x in [lo, hi].

    The check runs on ``q = rat(p) - slack - rational_slack`` where ``rat``
    rounds coefficients down and ``rational_slack`` bounds that rounding on
    the interval, so a positive verdict for ``q`` implies one for ``p``.
    The interval is widened outward by one ulp on each side.
    """
    if not isinstance(iv, Interval):
        iv = Interval(*iv)
    if slack < 0 or not math.isfinite(slack):
        raise ValueError(f"slack must be finite and >= 0, got {slack}")
    lo = Fraction(math.nextafter(iv.lo, -math.inf))
    hi = Fraction(math.nextafter(iv.hi, math.inf))
    radius = float(max(abs(lo), abs(hi)))
    fracs, rslack = rationalize_down(p, radius)
    q = list(fracs)
    q[0] -= Fraction(slack) + rslack
    q = _frac_trim(q)

    lo_v, hi_v = _frac_eval(q, lo), _frac_eval(q, hi)
    mid = (lo + hi) / 2
    mid_v = _frac_eval(q, mid)
    degree = len(q) - 1
    if degree <= 1:
        # linear: positive at both ends means positive in between
        method = "endpoint-linear"
        roots = 0 if (lo_v > 0) == (hi_v > 0) and lo_v != 0 and hi_v != 0 else 1
        positive = lo_v > 0 and hi_v > 0
    else:
        method = "sturm-exact"
        roots = _count_roots_exact(q, lo, hi)
        positive = roots == 0 and lo_v > 0 and hi_v > 0 and mid_v > 0
    return PositivityEvidence(
        method=method,
        positive=bool(positive),
        root_count=int(roots),
        sample_point=float(mid),
        sample_value=float(mid_v),
        rational_slack=_float_up(rslack),
        lo_value=float(lo_v),
        hi_value=float(hi_v),
    )
