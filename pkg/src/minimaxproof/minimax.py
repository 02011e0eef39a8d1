"""Best uniform polynomial approximation (Remez exchange) and sup-norm estimates.

The exchange is derivative-free: the error is scanned on a dense uniform grid,
one extremum is taken per sign run, the set is thinned to ``degree + 2``
alternating points that keep the global maximum, and each point is polished
by golden-section search inside its grid bracket.  Function values that enter
the linear solve are computed in extended precision; grid scans and the
golden-section probes may use the faster double-precision path of the
:class:`FunctionHandle`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import mpmath as mp
import numpy as np

from .errors import ConvergenceError, EvaluationError
from .polycore import Interval, Polynomial

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class FunctionHandle:
    """A real function of one variable with an extended-precision evaluator.

    ``mp_eval`` maps an mpf to an mpf and is called inside
    ``mp.workdps(dps)``.  ``np_eval`` optionally evaluates a float array in
    double precision; it is used for grid scans only when ``grid_precision``
    is ``"double"``.
    """

    mp_eval: Callable
    label: str = "f"
    np_eval: Optional[Callable] = None
    grid_precision: str = "extended"
    dps: int = 30

    @classmethod
    def from_numpy(cls, fn: Callable, label: str = "f", dps: int = 30) -> FunctionHandle:
        """Wrap a vectorized float function; extended evaluation is just float evaluation."""
        def mp_eval(x):
            return mp.mpf(float(fn(np.array([float(x)]))[0]))
        return cls(mp_eval, label, fn, "double", dps)

    def __call__(self, x):
        with mp.workdps(self.dps):
            v = self.mp_eval(mp.mpf(x))
            if not mp.isfinite(v):
                raise EvaluationError(f"evaluation failure: {self.label} is not finite at x = {float(x)!r}")
            return +v

    def value(self, x) -> float:
        return float(self(x))

    def sample(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        if self.grid_precision == "double" and self.np_eval is not None:
            vals = np.asarray(self.np_eval(xs), dtype=float)
        else:
            vals = np.array([float(self(x)) for x in xs])
        if not np.all(np.isfinite(vals)):
            bad = xs[~np.isfinite(vals)][0]
            raise EvaluationError(f"evaluation failure: {self.label} is not finite at x = {bad!r}")
        return vals


@dataclass(frozen=True)
class RemezOptions:
    leveling_tol: float = 1e-3
    max_iter: int = 50
    grid_size: int = 4097
    # golden-section stops when the bracket is below this fraction of the interval
    refine_tol: float = 1e-12
    # residuals this small (relative to max|f|) count as an exact fit
    exact_tol: float = 1e-13


@dataclass(frozen=True)
class MinimaxResult:
    poly: Polynomial
    err: float
    reference: tuple
    residuals: tuple
    iterations: int
    degree: int
    leveling_tol: float
    converged: bool = True
    exact: bool = False

    @property
    def spread_ratio(self) -> float:
        mags = [abs(r) for r in self.residuals]
        return max(mags) / min(mags) if min(mags) > 0 else math.inf


@dataclass(frozen=True)
class EquioscillationReport:
    alternations: int
    spread_ratio: float
    passed: bool


def chebyshev_reference(iv: Interval, n: int) -> list:
    """``n`` Chebyshev extreme points of ``iv`` in increasing order (endpoints included)."""
    if n == 1:
        return [iv.mid]
    half = 0.5 * iv.width
    pts = [iv.mid + half * math.sin(math.pi * j / (2 * (n - 1))) for j in range(-n + 1, n, 2)]
    pts[0], pts[-1] = iv.lo, iv.hi
    return pts


def _solve_reference(ref, fvals, degree, center, scale, dps):
    """Solve p(x_i) + (-1)**i E = f(x_i); returns x-monomial coefficients and E."""
    n = degree + 2
    with mp.workdps(dps + 10):
        A = mp.matrix(n, n)
        for i, x in enumerate(ref):
            u = (mp.mpf(x) - center) / scale
            for j in range(degree + 1):
                A[i, j] = u ** j
            A[i, degree + 1] = (-1) ** i
        sol = mp.lu_solve(A, mp.matrix([mp.mpf(v) for v in fvals]))
        cu = [sol[j] for j in range(degree + 1)]
        c, s = mp.mpf(center), mp.mpf(scale)
        coeffs = []
        for k in range(degree + 1):
            acc = mp.mpf(0)
            for j in range(k, degree + 1):
                acc += cu[j] * mp.binomial(j, k) * (-c) ** (j - k) / s ** j
            coeffs.append(float(acc))
        return coeffs, float(sol[degree + 1])


def _sign_runs(e: np.ndarray) -> list:
    """Index of the largest |e| in each maximal run of constant sign."""
    s = np.sign(e)
    # zeros join the run before them (or after, at the start)
    nz = np.flatnonzero(s)
    if nz.size == 0:
        return []
    s[: nz[0]] = s[nz[0]]
    for i in range(nz[0] + 1, s.size):
        if s[i] == 0:
            s[i] = s[i - 1]
    cuts = np.flatnonzero(np.diff(s)) + 1
    starts = np.concatenate([[0], cuts])
    stops = np.concatenate([cuts, [s.size]])
    return [int(a + np.argmax(np.abs(e[a:b]))) for a, b in zip(starts, stops)]


def _thin_alternating(idx: list, mags: list, n: int) -> Optional[list]:
    """Reduce an alternating extremum list to ``n`` points keeping the largest."""
    idx, mags = list(idx), list(mags)
    if len(idx) < n:
        return None
    while len(idx) > n:
        if len(idx) == n + 1:
            drop = 0 if mags[0] < mags[-1] else len(idx) - 1
            del idx[drop], mags[drop]
            continue
        i = int(np.argmin(mags))
        if i == 0 or i == len(idx) - 1:
            del idx[i], mags[i]
            continue
        # removing an interior point joins two same-sign neighbours: keep the larger
        j = i - 1 if mags[i - 1] < mags[i + 1] else i + 1
        for k in sorted((i, j), reverse=True):
            del idx[k], mags[k]
    return idx


def _golden_max(func, lo: np.ndarray, hi: np.ndarray, iters: int):
    """Vectorized golden-section maximization of ``func`` on brackets [lo, hi]."""
    a, b = lo.astype(float).copy(), hi.astype(float).copy()
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = func(c), func(d)
    for _ in range(iters):
        left = fc >= fd
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        new = np.where(left, b - _INVPHI * (b - a), a + _INVPHI * (b - a))
        fn = func(new)
        c, d, fc, fd = (np.where(left, new, d), np.where(left, c, new),
                        np.where(left, fn, fd), np.where(left, fc, fn))
    best = np.where(fc >= fd, c, d)
    return best, np.maximum(fc, fd)


def _golden_iters(width: float, target: float) -> int:
    if target <= 0 or width <= target:
        return 1
    return int(math.ceil(math.log(target / width) / math.log(_INVPHI))) + 1


def _refine_extrema(f: FunctionHandle, poly: Polynomial, grid, e_grid, idx, rel_tol, span):
    """Polish grid extrema of s * (f - poly) inside their grid neighbours."""
    idx = np.asarray(idx)
    signs = np.sign(e_grid[idx])
    signs[signs == 0] = 1.0
    lo = grid[np.maximum(idx - 1, 0)]
    hi = grid[np.minimum(idx + 1, grid.size - 1)]

    def obj(xs):
        return signs * (f.sample(xs) - poly(xs))

    iters = _golden_iters(float((hi - lo).max()), rel_tol * span)
    xs, vals = _golden_max(obj, lo, hi, iters)
    keep_grid = signs * e_grid[idx] >= vals
    return np.where(keep_grid, grid[idx], xs)


def remez_minimax(f: FunctionHandle, iv: Interval, degree: int,
                  opts: RemezOptions | None = None) -> MinimaxResult:
    """Minimax polynomial of at most ``degree`` for ``f`` on ``iv``.

    Raises ConvergenceError (with ``best`` set to the iterate of smallest
    error) when the residuals do not level to ``opts.leveling_tol`` within
    ``opts.max_iter`` exchanges.
    """
    opts = opts or RemezOptions()
    if degree < 0:
        raise ValueError("degree must be >= 0")
    if not isinstance(iv, Interval):
        iv = Interval(*iv)
    n = degree + 2
    grid = np.linspace(iv.lo, iv.hi, max(opts.grid_size, 4 * n + 1))
    fg = f.sample(grid)
    fscale = max(1.0, float(np.max(np.abs(fg))))
    center, scale = iv.mid, 0.5 * iv.width

    cache: dict = {}

    def fmp(x):
        key = float(x)
        if key not in cache:
            cache[key] = f(key)
        return cache[key]

    # symmetric references are degenerate for even/odd f (E = 0); the
    # alternatives drop one point of a longer Chebyshev set to break symmetry
    longer = chebyshev_reference(iv, n + 1)
    starts = [chebyshev_reference(iv, n), longer[1:], longer[:-1]]
    best = None
    it = 0
    for ref in starts:
        while it < opts.max_iter:
            it += 1
            coeffs, _ = _solve_reference(ref, [fmp(x) for x in ref], degree, center, scale, f.dps)
            poly = Polynomial(coeffs)
            e_grid = fg - poly(grid)
            runs = _sign_runs(e_grid)
            sel = _thin_alternating(runs, [abs(e_grid[i]) for i in runs], n)
            if sel is None:
                # fewer sign runs than reference points: only an exact fit explains it
                with mp.workdps(f.dps):
                    resid = [float(fmp(x) - poly(mp.mpf(x))) for x in ref]
                gmax = float(np.max(np.abs(e_grid)))
                if gmax <= opts.exact_tol * fscale:
                    return MinimaxResult(poly, max(abs(r) for r in resid), tuple(ref), tuple(resid),
                                         it, degree, opts.leveling_tol, True, True)
                if best is None or gmax < best.err:
                    best = MinimaxResult(poly, gmax, tuple(ref), tuple(resid), it, degree,
                                         opts.leveling_tol, False, False)
                break
            new_ref = np.sort(_refine_extrema(f, poly, grid, e_grid, sel, opts.refine_tol, iv.width))
            with mp.workdps(f.dps):
                resid = [float(fmp(x) - poly(mp.mpf(float(x)))) for x in new_ref]
            mags = [abs(r) for r in resid]
            err = max(mags)
            alternating = all(r1 * r2 < 0 for r1, r2 in zip(resid, resid[1:]))
            exact = err <= opts.exact_tol * fscale
            leveled = alternating and min(mags) > 0 and err / min(mags) - 1.0 <= opts.leveling_tol
            result = MinimaxResult(poly, err, tuple(float(x) for x in new_ref), tuple(resid), it,
                                   degree, opts.leveling_tol, leveled or exact, exact)
            if best is None or result.err < best.err:
                best = result
            if leveled or exact:
                return result
            if np.unique(new_ref).size < n:
                break
            ref = [float(x) for x in new_ref]
        if it >= opts.max_iter:
            break
    best = MinimaxResult(best.poly, best.err, best.reference, best.residuals, best.iterations,
                         best.degree, best.leveling_tol, False, False)
    raise ConvergenceError(
        f"Remez exchange did not level within {opts.max_iter} iterations "
        f"(best spread ratio {best.spread_ratio:.6g})", best=best)


def infnorm(f: FunctionHandle, p: Polynomial, iv: Interval, samples: int = 8193,
            refine_top: int = 8, refine_tol: float = 1e-12) -> float:
    """Sampled estimate of max |f - p| on ``iv``.

    The value is a *lower bound* of the true sup norm: it is the largest
    error seen on a uniform grid of ``samples`` points after golden-section
    polishing of the ``refine_top`` largest local maxima.
    """
    if not isinstance(iv, Interval):
        iv = Interval(*iv)
    samples = max(int(samples), 4096)
    grid = np.linspace(iv.lo, iv.hi, samples)
    e = np.abs(f.sample(grid) - p(grid))
    padded = np.concatenate([[-np.inf], e, [-np.inf]])
    peaks = np.flatnonzero((padded[1:-1] >= padded[:-2]) & (padded[1:-1] >= padded[2:]))
    top = peaks[np.argsort(-e[peaks], kind="stable")[:refine_top]]
    lo = grid[np.maximum(top - 1, 0)]
    hi = grid[np.minimum(top + 1, grid.size - 1)]
    iters = _golden_iters(float((hi - lo).max()), refine_tol * iv.width)
    _, vals = _golden_max(lambda xs: np.abs(f.sample(xs) - p(xs)), lo, hi, iters)
    return float(max(e.max(), vals.max()))


def equioscillation_report(r: MinimaxResult) -> EquioscillationReport:
    """Count alternations of the residuals and check their leveling."""
    res = list(r.residuals)
    longest = run = 1 if res else 0
    for a, b in zip(res, res[1:]):
        run = run + 1 if a * b < 0 else 1
        longest = max(longest, run)
    spread = r.spread_ratio
    passed = longest >= r.degree + 2 and spread <= 1.0 + r.leveling_tol
    return EquioscillationReport(longest, spread, passed)
