"""Power-efficiency trade-off: parametric curve, sampled cloud and its envelope.

The envelope is built by binning the normalized power and keeping the
extreme efficiencies per bin. A convex hull would cut across the visibly
non-convex upper boundary of the cloud.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import EmptyInput
from .numerics import sample_uniform_pairs
from .thermo import (
    CyclePoint,
    DissipationParams,
    EngineParams,
    efficiency_stage1,
    efficiency_two_time,
    emp_stage1,
    emp_two_time,
    power_stage1,
    power_two_time,
)

FIG4_BOX = ((1.0, 4.0), (1.0, 400.0))


@dataclass(frozen=True)
class TradeoffPoint:
    p_norm: float
    eta_norm: float
    source: CyclePoint


@dataclass(frozen=True)
class Cloud:
    """Column view of a sampled cloud; ``points()`` gives TradeoffPoint rows."""

    t_tilde: np.ndarray
    t_e: np.ndarray
    p_norm: np.ndarray
    eta_norm: np.ndarray
    p_max: float

    def __len__(self):
        return len(self.p_norm)

    def points(self) -> list[TradeoffPoint]:
        return [
            TradeoffPoint(float(p), float(e), CyclePoint(t_tilde=float(t), t_e=float(te)))
            for p, e, t, te in zip(self.p_norm, self.eta_norm, self.t_tilde, self.t_e)
        ]


def curve_stage1(ep: EngineParams, t_grid: Iterable[float]) -> list[TradeoffPoint]:
    """(P / P_max, eta / eta_C) along increasing measurement time.

    The maximum-power time is merged into the grid, so the curve always
    contains its rightmost point p_norm = 1.
    """
    t = np.asarray(list(t_grid), dtype=float)
    if t.size == 0:
        raise EmptyInput("empty time grid")
    if np.any(t <= 0):
        raise ValueError("time grid must be positive")
    emp = emp_stage1(ep)
    t_star = emp.arg_times.t_tilde
    t = np.union1d(t, [t_star])
    p = np.atleast_1d(power_stage1(t, ep)) / emp.p_max
    eta = np.atleast_1d(efficiency_stage1(t, ep)) / ep.eta_c
    p[t == t_star] = 1.0
    return [TradeoffPoint(float(pi), float(ei), CyclePoint(t_tilde=float(ti))) for pi, ei, ti in zip(p, eta, t)]


def cloud_arrays(ep: EngineParams, dp: DissipationParams, n: int, box=FIG4_BOX, seed: int = 0,
                 include_negative: bool = False, chunk: int = 1_000_000) -> Cloud:
    """Evaluate ``n`` uniformly sampled (t, t_E) cycles, normalized by the box maximum.

    P_max comes from the two-time optimizer over the same box, so every
    sample has p_norm <= 1. Cycles with negative power are dropped unless
    ``include_negative``.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    emp = emp_two_time(ep, dp, box=box)
    cols = {k: [] for k in ("t", "te", "p", "eta")}
    for start in range(0, n, chunk):
        pairs = sample_uniform_pairs(min(chunk, n - start), box, seed, start=start)
        t, te = pairs[:, 0], pairs[:, 1]
        p = np.asarray(power_two_time(t, te, ep, dp)) / emp.p_max
        eta = np.asarray(efficiency_two_time(t, te, ep, dp)) / ep.eta_c
        keep = slice(None) if include_negative else p >= 0.0
        for k, v in zip(cols, (t, te, p, eta)):
            cols[k].append(v[keep])
    t, te, p, eta = (np.concatenate(cols[k]) for k in cols)
    return Cloud(t_tilde=t, t_e=te, p_norm=p, eta_norm=eta, p_max=emp.p_max)


def cloud_two_time(ep: EngineParams, dp: DissipationParams, n: int, box=FIG4_BOX, seed: int = 0,
                   include_negative: bool = False) -> list[TradeoffPoint]:
    return cloud_arrays(ep, dp, n, box, seed, include_negative).points()


@dataclass(frozen=True)
class EnvelopeCurve:
    p_norm: np.ndarray  # bin centers, increasing
    eta_lo: np.ndarray
    eta_hi: np.ndarray
    bin_count: int
    index: np.ndarray  # bin number of each row
    p_lo: float = 0.0
    p_hi: float = 1.0

    def rows(self) -> list[tuple[float, float, float]]:
        return list(zip(self.p_norm.tolist(), self.eta_lo.tolist(), self.eta_hi.tolist()))

    def bin_index(self, p):
        return _bin_index(np.asarray(p, dtype=float), self.p_lo, self.p_hi, self.bin_count)

    def contains(self, p, eta, slack: float = 0.0) -> np.ndarray:
        """Whether each (p, eta) lies inside the [eta_lo, eta_hi] span of its bin."""
        p = np.atleast_1d(np.asarray(p, dtype=float))
        eta = np.atleast_1d(np.asarray(eta, dtype=float))
        occupied = np.full(self.bin_count, -1)
        occupied[self.index] = np.arange(len(self.index))
        row = occupied[self.bin_index(p)]
        ok = row >= 0
        lo = np.where(ok, self.eta_lo[row], np.nan)
        hi = np.where(ok, self.eta_hi[row], np.nan)
        return ok & (eta >= lo - slack) & (eta <= hi + slack)


def _bin_index(p, lo, hi, bins):
    idx = np.floor((p - lo) / (hi - lo) * bins).astype(np.int64)
    return np.clip(idx, 0, bins - 1)


def envelope_arrays(p_norm, eta_norm, bins: int = 200) -> EnvelopeCurve:
    p = np.asarray(p_norm, dtype=float).ravel()
    eta = np.asarray(eta_norm, dtype=float).ravel()
    if p.size == 0:
        raise EmptyInput("no points to envelope")
    if bins < 2:
        raise ValueError("bins must be at least 2")
    lo = min(0.0, float(p.min()))
    hi = max(1.0, float(p.max()))
    idx = _bin_index(p, lo, hi, bins)
    e_lo = np.full(bins, np.inf)
    e_hi = np.full(bins, -np.inf)
    np.minimum.at(e_lo, idx, eta)
    np.maximum.at(e_hi, idx, eta)
    occ = np.isfinite(e_lo)
    centers = lo + (np.arange(bins) + 0.5) * (hi - lo) / bins
    return EnvelopeCurve(
        p_norm=centers[occ], eta_lo=e_lo[occ], eta_hi=e_hi[occ], bin_count=bins,
        index=np.flatnonzero(occ), p_lo=lo, p_hi=hi
    )


def envelope(points: Sequence[TradeoffPoint], bins: int = 200) -> EnvelopeCurve:
    """Per-bin min and max of eta_norm over equal p_norm bins on [0, 1]; empty bins omitted."""
    if len(points) == 0:
        raise EmptyInput("no points to envelope")
    p = np.fromiter((pt.p_norm for pt in points), float, len(points))
    e = np.fromiter((pt.eta_norm for pt in points), float, len(points))
    return envelope_arrays(p, e, bins)
