"""Special functions, quadrature, root finding, maximization and reproducible sampling.

Everything here is pure and reentrant. Tolerance defaults: quadrature 1e-10
absolute, root finding 1e-10 absolute in the argument, optimizers 1e-8
relative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate as _spi
from scipy import special as _sps

from .errors import NoSignChange, NonConvergence, NonFiniteObjective

QUAD_TOL = 1e-10
ROOT_TOL = 1e-10
OPT_TOL = 1e-8

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValueError(f"interval bounds must be finite, got [{self.lo}, {self.hi}]")
        if not self.lo < self.hi:
            raise ValueError(f"interval needs lo < hi, got [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def __iter__(self):
        yield self.lo
        yield self.hi


def as_interval(iv) -> Interval:
    if isinstance(iv, Interval):
        return iv
    lo, hi = iv
    return Interval(float(lo), float(hi))


def _scalar_or_array(x):
    arr = np.asarray(x)
    return arr.item() if arr.ndim == 0 else arr


def erf(x):
    """Gauss error function ``2/sqrt(pi) * int_0^x exp(-u^2) du``.

    Accepts scalars or arrays. This is the single erf entry point of the
    package; no complementary function is used anywhere.
    """
    return _scalar_or_array(_sps.erf(np.asarray(x, dtype=float)))


def integrate(f: Callable, iv, tol: float = QUAD_TOL, limit: int = 4000):
    """Adaptive Gauss-Kronrod quadrature of ``f`` over a finite interval.

    ``f`` may return a real or complex scalar, or an array (all components are
    integrated together and the error estimate is the max-norm over them).
    Infinite ranges must be truncated by the caller.

    Raises
    ------
    NonConvergence
        If the subdivision limit is hit before the absolute error estimate
        drops below ``tol``.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    iv = as_interval(iv)
    res, err, info = _spi.quad_vec(
        f, iv.lo, iv.hi, epsabs=tol, epsrel=0.0, norm="max", limit=limit, full_output=True
    )
    if info.status != 0 or not err <= tol:
        raise NonConvergence(
            f"quadrature on [{iv.lo}, {iv.hi}] stopped with error estimate {err:.3e} > tol {tol:.1e}"
        )
    return res


def find_root_monotone(f: Callable[[float], float], iv, tol: float = ROOT_TOL, max_iter: int = 200) -> float:
    """Bisection for a sign change of a continuous monotone ``f``.

    Returns the midpoint of the final bracket, whose width is at most ``tol``.
    """
    iv = as_interval(iv)
    lo, hi = iv.lo, iv.hi
    f_lo, f_hi = f(lo), f(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if not f_lo * f_hi < 0.0:
        raise NoSignChange(f"f({lo}) = {f_lo:.6g} and f({hi}) = {f_hi:.6g} have the same sign")
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if f_mid == 0.0:
            return mid
        if (f_mid < 0.0) == (f_lo < 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _grid(lo: float, hi: float, n: int) -> np.ndarray:
    # log spacing when the range is positive and spans more than a factor of 10
    if lo > 0 and hi / lo > 10.0:
        g = np.geomspace(lo, hi, n)
    else:
        g = np.linspace(lo, hi, n)
    g[0], g[-1] = lo, hi
    return g


def _checked(v) -> float:
    v = float(v)
    if not math.isfinite(v):
        raise NonFiniteObjective(f"objective returned {v}")
    return v


def _golden(f, a, b, tol):
    x1 = b - INV_PHI * (b - a)
    x2 = a + INV_PHI * (b - a)
    f1, f2 = _checked(f(x1)), _checked(f(x2))
    for _ in range(400):
        scale = max(abs(a), abs(b), 1e-300)
        if b - a <= tol * scale:
            break
        if f1 >= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - INV_PHI * (b - a)
            f1 = _checked(f(x1))
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + INV_PHI * (b - a)
            f2 = _checked(f(x2))
    return (x1, f1) if f1 >= f2 else (x2, f2)


def _polish(f, x, fx, lo, hi, rel_step=1e-5):
    """Finite-difference Newton steps on a smooth peak.

    Golden section stalls at ~sqrt(eps) relative accuracy because function
    values stop being distinguishable; the central-difference derivative does
    not.
    """
    for _ in range(3):
        h = rel_step * max(abs(x), 1e-3 * (hi - lo))
        if x - h < lo or x + h > hi:
            break
        fm, fp = _checked(f(x - h)), _checked(f(x + h))
        curv = fp - 2.0 * fx + fm
        if not curv < 0.0:
            break
        dx = -h * (fp - fm) / (2.0 * curv)
        if abs(dx) > h:
            break
        xn = min(max(x + dx, lo), hi)
        fn = _checked(f(xn))
        # accept unless clearly worse; ties are below resolution at this scale
        if fn < fx - 64.0 * np.finfo(float).eps * max(abs(fx), 1e-300):
            break
        x, fx = xn, fn
        if abs(dx) <= 1e-3 * h:
            break
    return x, fx


def maximize_1d(
    f: Callable[[float], float],
    iv,
    tol: float = OPT_TOL,
    scan: int = 200,
    vectorized: bool = False,
) -> tuple[float, float]:
    """Maximize ``f`` on ``iv``.

    A ``scan``-point pre-scan (log-spaced when the interval is positive and
    spans a decade or more) picks the global grid winner; golden section then
    refines inside the neighbouring grid cells and a finite-difference Newton
    polish finishes. With ``vectorized=True`` the pre-scan calls ``f`` once on
    the whole grid.
    """
    iv = as_interval(iv)
    grid = _grid(iv.lo, iv.hi, max(scan, 3))
    if vectorized:
        vals = np.asarray(f(grid), dtype=float)
    else:
        vals = np.array([f(x) for x in grid], dtype=float)
    if not np.all(np.isfinite(vals)):
        bad = grid[~np.isfinite(vals)][0]
        raise NonFiniteObjective(f"objective is not finite at x = {bad!r}")
    i = int(np.argmax(vals))
    a = grid[max(i - 1, 0)]
    b = grid[min(i + 1, len(grid) - 1)]
    if np.all(vals == vals[i]):
        return float(grid[i]), float(vals[i])
    x, fx = _golden(f, a, b, tol)
    if fx < vals[i]:
        x, fx = float(grid[i]), float(vals[i])
    x, fx = _polish(f, x, fx, iv.lo, iv.hi)
    return float(x), float(fx)


def maximize_2d(
    f: Callable[[float, float], float],
    box,
    tol: float = OPT_TOL,
    grid: int = 64,
    line_scan: int = 24,
    max_sweeps: int = 500,
    vectorized: bool = False,
) -> tuple[tuple[float, float], float]:
    """Maximize ``f(x, y)`` over a box.

    Coarse (log-)grid scan, then alternating one-dimensional maximizations
    along x and y until both coordinates move by less than ``tol`` relative in
    a sweep. Returns the best point found and its value.
    """
    ix, iy = (as_interval(b) for b in box)
    gx, gy = _grid(ix.lo, ix.hi, grid), _grid(iy.lo, iy.hi, grid)
    if vectorized:
        vals = np.asarray(f(gx[:, None], gy[None, :]), dtype=float)
        vals = np.broadcast_to(vals, (grid, grid))
    else:
        vals = np.array([[f(x, y) for y in gy] for x in gx], dtype=float)
    if not np.all(np.isfinite(vals)):
        raise NonFiniteObjective("objective is not finite on the coarse grid")
    i, j = np.unravel_index(int(np.argmax(vals)), vals.shape)
    x, y = float(gx[i]), float(gy[j])
    if np.all(vals == vals[i, j]):
        return (x, y), float(vals[i, j])

    # local windows: start at the neighbouring grid cells, then track the moves
    wx = (gx[max(i - 1, 0)], gx[min(i + 1, grid - 1)])
    wy = (gy[max(j - 1, 0)], gy[min(j + 1, grid - 1)])
    for _ in range(max_sweeps):
        x_old, y_old = x, y
        x, _ = _line(lambda s: f(s, y), ix, wx, tol, line_scan)
        y, _ = _line(lambda s: f(x, s), iy, wy, tol, line_scan)
        dx, dy = abs(x - x_old), abs(y - y_old)
        if dx <= tol * max(abs(x), 1e-300) and dy <= tol * max(abs(y), 1e-300):
            break
        wx = _window(x, dx, ix)
        wy = _window(y, dy, iy)
    return (x, y), _checked(f(x, y))


def _window(c, step, iv):
    half = max(4.0 * step, 1e-6 * max(abs(c), 1e-12))
    return max(iv.lo, c - half), min(iv.hi, c + half)


def _line(g, iv, window, tol, scan):
    lo, hi = window
    if not hi > lo:
        lo, hi = iv.lo, iv.hi
    x, v = maximize_1d(g, (lo, hi), tol=tol, scan=scan)
    # optimum pinned to an interior window edge: redo on the full interval
    edge = 1e-9 * max(abs(x), 1e-12)
    if (abs(x - lo) <= edge and lo > iv.lo) or (abs(x - hi) <= edge and hi < iv.hi):
        x, v = maximize_1d(g, iv, tol=tol, scan=max(scan, 64))
    return x, v


_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


def _splitmix64(counter: np.ndarray, seed: int) -> np.ndarray:
    with np.errstate(over="ignore"):
        z = np.uint64(seed & 0xFFFFFFFFFFFFFFFF) + (counter + np.uint64(1)) * _GAMMA
        z = (z ^ (z >> np.uint64(30))) * _MIX1
        z = (z ^ (z >> np.uint64(27))) * _MIX2
        return z ^ (z >> np.uint64(31))


def uniform01(index: np.ndarray, seed: int) -> np.ndarray:
    """Counter-based uniforms in the open interval (0, 1); pure in (seed, index)."""
    bits = _splitmix64(np.asarray(index, dtype=np.uint64), seed) >> np.uint64(11)
    return (bits.astype(np.float64) + 0.5) * 2.0**-53


def sample_uniform_pairs(n: int, box, seed: int, start: int = 0) -> np.ndarray:
    """``n`` uniform pairs in ``box`` as an ``(n, 2)`` array.

    Pair ``k`` depends only on ``(seed, start + k)``, so any chunking or
    parallel split of the index range reproduces the same stream.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    ix, iy = (as_interval(b) for b in box)
    k = np.arange(start, start + n, dtype=np.uint64)
    u = uniform01(2 * k, seed)
    v = uniform01(2 * k + np.uint64(1), seed)
    out = np.empty((n, 2))
    out[:, 0] = ix.lo + ix.width * u
    out[:, 1] = iy.lo + iy.width * v
    # rounding can land exactly on the upper edge for very narrow boxes
    np.minimum(out[:, 0], ix.hi, out=out[:, 0])
    np.minimum(out[:, 1], iy.hi, out=out[:, 1])
    return out
