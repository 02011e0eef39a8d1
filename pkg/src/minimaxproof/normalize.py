"""Division of endpoint roots: the normalized function g and its end values.

For f with a root of order n at a and of order m at b,

    g(x) = f(x) / ((x - a)**n (b - x)**m)   on (a, b),

extended continuously by the limits alpha (at a) and beta (at b).  Then
f >= 0 on [a, b] exactly when g >= 0 there, and a negative alpha or beta
already refutes the inequality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Optional, Union

import mpmath as mp
import numpy as np

from .errors import EvaluationError, LimitError
from .minimax import FunctionHandle
from .polycore import Interval

LEFT, RIGHT = "left-end", "right-end"
CLOSED_FORM, RICHARDSON, TAYLOR = "closed-form", "richardson-limit", "taylor-endpoint"

RICHARDSON_LEVELS = 12
RICHARDSON_RATIO = 0.5
RICHARDSON_TOL = 1e-9
# a limit below this fraction of the sampled quotients counts as zero
ZERO_TOL = 1e-9
# points closer than this fraction of b - a to an end take the end value
ENDPOINT_BAND = 1e-8

Hint = Union[None, float, str, Callable[[], object]]


@dataclass(frozen=True)
class EndpointProfile:
    """Interval with the declared root orders at its ends.

    ``a_exact`` / ``b_exact`` optionally hold the endpoints at more than
    double precision (anything ``mpmath.mpf`` accepts, or a zero-argument
    callable evaluated at the working precision).
    """

    iv: Interval
    n: int = 0
    m: int = 0
    a_exact: object = None
    b_exact: object = None

    def __post_init__(self):
        if self.n < 0 or self.m < 0:
            raise ValueError("root orders must be >= 0")

    def a(self):
        return _resolve(self.a_exact) if self.a_exact is not None else mp.mpf(self.iv.lo)

    def b(self):
        return _resolve(self.b_exact) if self.b_exact is not None else mp.mpf(self.iv.hi)


def _resolve(v):
    return mp.mpf(v()) if callable(v) else mp.mpf(v)


@dataclass(frozen=True)
class LimitValue:
    value: float
    method: str
    error: float = 0.0


@dataclass(frozen=True)
class NormalizedFunction:
    g: FunctionHandle
    profile: EndpointProfile
    alpha: float
    beta: float
    alpha_method: str
    beta_method: str
    alpha_error: float = 0.0
    beta_error: float = 0.0

    def __call__(self, x):
        return self.g(x)


def _hint_value(hint: Hint, dps: int):
    with mp.workdps(dps):
        if isinstance(hint, str):
            from .exprlang import EvalEnv, eval_expr, parse_expr  # exprlang does not import us

            return eval_expr(parse_expr(hint), EvalEnv(0, "mp", dps))
        if callable(hint):
            return mp.mpf(hint())
        return mp.mpf(hint)


def richardson_limit(sample: Callable, h0, levels: int = RICHARDSON_LEVELS,
                     ratio: float = RICHARDSON_RATIO):
    """Extrapolate ``sample(h)`` to h -> 0 from h0 * ratio**k, k < levels.

    Assumes an expansion in integer powers of h.  Returns
    ``(estimate, error_estimate, max |sample|)``; the estimate is the
    diagonal tableau entry whose distance to its predecessors is smallest.
    """
    ys = [sample(h0 * mp.mpf(ratio) ** k) for k in range(levels)]
    scale = max(abs(y) for y in ys)
    table = []
    best, best_err = ys[0], mp.inf
    for k, y in enumerate(ys):
        row = [y]
        for j in range(1, k + 1):
            factor = mp.mpf(1) / mp.mpf(ratio) ** j
            row.append(row[j - 1] + (row[j - 1] - table[k - 1][j - 1]) / (factor - 1))
        if k > 0:
            err = max(abs(row[k] - table[k - 1][k - 1]), abs(row[k] - row[k - 1]))
            if err < best_err:
                best, best_err = row[k], err
        table.append(row)
    return best, best_err, scale


def endpoint_limit(f: FunctionHandle, profile: EndpointProfile, side: str,
                   hint: Hint = None, method: Optional[str] = None) -> LimitValue:
    """Limit of f(x) / ((x-a)**n (b-x)**m) at one end of the interval.

    A ``hint`` (number, expression text or callable) is used as is and
    tagged closed-form.  Otherwise the quotient is extrapolated along
    x = end -/+ (b - a)/8 * 2**-k, k < 12 (richardson-limit), or, when
    ``method="taylor-endpoint"``, computed from a numerical derivative
    f^(n)(a) / (n! (b-a)**m) (resp. (-1)**m f^(m)(b) / (m! (b-a)**n)).
    """
    if side not in (LEFT, RIGHT):
        raise ValueError(f"side must be {LEFT!r} or {RIGHT!r}")
    n, m = profile.n, profile.m
    order = n if side == LEFT else m
    dps = f.dps + 5 * order + 10
    fx = replace(f, dps=dps)
    with mp.workdps(dps):
        a, b = profile.a(), profile.b()
        width = b - a
        if hint is not None:
            value = _hint_value(hint, dps)
            result = LimitValue(float(value), CLOSED_FORM)
        elif order == 0:
            end = a if side == LEFT else b
            other = m if side == LEFT else n
            value = fx(end) / width ** other
            result = LimitValue(float(value), CLOSED_FORM)
        elif method == TAYLOR:
            # mp.diff raises the working precision; calling the handle would
            # round a + h back to a, so evaluate at the ambient precision
            if side == LEFT:
                d = mp.diff(f.mp_eval, a, n, direction=1)
                value = d / (mp.factorial(n) * width ** m)
            else:
                d = mp.diff(f.mp_eval, b, m, direction=-1)
                value = (-1) ** m * d / (mp.factorial(m) * width ** n)
            result = LimitValue(float(value), TAYLOR)
        else:
            def quotient(h):
                x = a + h if side == LEFT else b - h
                return fx(x) / ((x - a) ** n * (b - x) ** m)

            try:
                value, err, scale = richardson_limit(quotient, width / 8)
            except (ZeroDivisionError, EvaluationError) as exc:
                raise LimitError(f"limit not established at {side}: {exc}") from exc
            if not mp.isfinite(value):
                raise LimitError(f"limit not established at {side}: non-finite extrapolation")
            if abs(value) <= ZERO_TOL * scale:
                raise LimitError(
                    f"root order misdeclared at {side}: limit is zero (|value| = {mp.nstr(abs(value), 3)})")
            if err > RICHARDSON_TOL * abs(value):
                raise LimitError(
                    f"limit not established at {side}: successive estimates differ by "
                    f"{mp.nstr(err / abs(value), 3)} relative")
            result = LimitValue(float(value), RICHARDSON, float(err))
    if not math.isfinite(result.value):
        raise LimitError(f"limit at {side} is not finite")
    if result.value == 0.0:
        raise LimitError(f"root order misdeclared at {side}: limit is zero")
    return result


def build_normalized(f: FunctionHandle, profile: EndpointProfile, alpha_hint: Hint = None,
                     beta_hint: Hint = None, method: Optional[str] = None) -> NormalizedFunction:
    """Construct g with g(a) = alpha, g(b) = beta and g = f / divisor inside.

    Points within ``ENDPOINT_BAND * (b - a)`` of an end evaluate to the end
    value so that 0/0 round-off never reaches the caller.
    """
    left = endpoint_limit(f, profile, LEFT, alpha_hint, method)
    right = endpoint_limit(f, profile, RIGHT, beta_hint, method)
    n, m = profile.n, profile.m
    alpha, beta = left.value, right.value
    lo, hi = profile.iv.lo, profile.iv.hi
    band = ENDPOINT_BAND * (hi - lo)

    def g_mp(x):
        a, b = profile.a(), profile.b()
        if x - a <= band:
            return mp.mpf(alpha)
        if b - x <= band:
            return mp.mpf(beta)
        if n == 0 and m == 0:
            return f.mp_eval(x)
        return f.mp_eval(x) / ((x - a) ** n * (b - x) ** m)

    g_np = None
    if f.np_eval is not None:
        def g_np(xs):
            xs = np.asarray(xs, dtype=float)
            out = np.empty_like(xs)
            near_a = xs - lo <= band
            near_b = (hi - xs <= band) & ~near_a
            inner = ~(near_a | near_b)
            out[near_a] = alpha
            out[near_b] = beta
            if inner.any():
                xi = xs[inner]
                out[inner] = np.asarray(f.np_eval(xi), dtype=float) / ((xi - lo) ** n * (hi - xi) ** m)
            return out

    label = f"{f.label} / ((x-a)^{n} (b-x)^{m})" if n or m else f.label
    g = FunctionHandle(g_mp, label, g_np, f.grid_precision, f.dps)
    return NormalizedFunction(g, profile, alpha, beta, left.method, right.method,
                              left.error, right.error)


def transform_infinite(f: FunctionHandle, a: float, limit_at_infinity=None) -> FunctionHandle:
    """Pull f on [a, inf) back to [0, 1] through x = a + t / (1 - t).

    The value at t = 1 is ``limit_at_infinity`` (the caller's contract);
    without it, evaluating at t = 1 raises EvaluationError.
    """

    def sigma(t):
        return a + t / (1 - t)

    def h_mp(t):
        if t >= 1:
            if limit_at_infinity is None:
                raise EvaluationError("no limit at infinity was supplied for t = 1")
            return mp.mpf(limit_at_infinity)
        return f.mp_eval(sigma(t))

    h_np = None
    if f.np_eval is not None:
        def h_np(ts):
            ts = np.asarray(ts, dtype=float)
            out = np.empty_like(ts)
            at_inf = ts >= 1
            if at_inf.any():
                if limit_at_infinity is None:
                    raise EvaluationError("no limit at infinity was supplied for t = 1")
                out[at_inf] = float(limit_at_infinity)
            rest = ~at_inf
            out[rest] = f.np_eval(sigma(ts[rest]))
            return out

    return FunctionHandle(h_mp, f"{f.label} o (a + t/(1-t))", h_np, f.grid_precision, f.dps)
