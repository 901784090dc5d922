"""Finite-time performance of the quantum Szilard engine.

Units: k_B = 1. Energies are reported in units of ``t_h_energy`` (k_B T_H),
times in units of ``tau_m`` for the measurement-limited (A) and the
measurement + erasing (B) regimes. The Carnot-mapped regime (C) uses raw
times in the same unit as C_O and C_E.

Every inequality of the cycle analysis is taken saturated: stages II and III
are reversible in regime A, so the work, efficiency and power returned here
are upper bounds. Internals are computed in units of k_B T_H and only scaled
at the end, so changing ``t_h_energy`` never moves an argmax or a threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple, Optional

import numpy as np

from .errors import NoSignChange, NoThreshold, UndefinedEfficiency
from .information import LN2, ideality, mutual_info
from .numerics import OPT_TOL, ROOT_TOL, find_root_monotone, maximize_1d, maximize_2d


def _out(a):
    a = np.asarray(a)
    return a.item() if a.ndim == 0 else a


@dataclass(frozen=True)
class EngineParams:
    eta_c: float
    alpha: float
    t_h_energy: float = 1.0
    tau_m: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.eta_c < 1.0:
            raise ValueError(f"eta_c must lie in (0, 1), got {self.eta_c}")
        if not self.alpha >= 0.0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha}")
        if not self.t_h_energy > 0.0:
            raise ValueError(f"t_h_energy must be > 0, got {self.t_h_energy}")
        if not self.tau_m > 0.0:
            raise ValueError(f"tau_m must be > 0, got {self.tau_m}")

    @property
    def t_c_energy(self) -> float:
        return (1.0 - self.eta_c) * self.t_h_energy

    def with_(self, **kw) -> "EngineParams":
        return replace(self, **kw)


@dataclass(frozen=True)
class DissipationParams:
    c_e: float = 0.0
    c_o: float = 1.0

    def __post_init__(self):
        if not self.c_e >= 0.0:
            raise ValueError(f"c_e must be >= 0, got {self.c_e}")
        if not self.c_o >= 0.0:
            raise ValueError(f"c_o must be >= 0, got {self.c_o}")


@dataclass(frozen=True)
class CyclePoint:
    """Operation times of one cycle; entries not used by a regime are None."""

    t_tilde: Optional[float] = None
    t_e: Optional[float] = None
    t_o: Optional[float] = None


@dataclass(frozen=True)
class Performance:
    work: float
    heat_in: float
    efficiency: float
    power: float

    @property
    def positive_work(self) -> bool:
        return self.work > 0.0


@dataclass(frozen=True)
class EmpResult:
    arg_times: CyclePoint
    p_max: float
    eta_mp: float


class CarnotEmp(NamedTuple):
    eta_mp: float
    kappa: float


def eta_plus(eta_c):
    """Upper EMP bound of low-dissipation Carnot engines, eta_C / (2 - eta_C)."""
    eta_c = np.asarray(eta_c, dtype=float)
    return _out(eta_c / (2.0 - eta_c))


def eta_curzon_ahlborn(eta_c):
    return _out(1.0 - np.sqrt(1.0 - np.asarray(eta_c, dtype=float)))


# ---------------------------------------------------------------------------
# Regime A: measurement-limited cycle (t_E, t_O << t_M)
# ---------------------------------------------------------------------------

def _work1(t_tilde, ep):
    return (np.asarray(ideality(t_tilde, ep.alpha)) - (1.0 - ep.eta_c)) * LN2


def work_stage1(t_tilde, ep: EngineParams):
    """W = [M(t) - (1 - eta_C)] ln 2 k_B T_H; negative below the threshold time."""
    return _out(ep.t_h_energy * _work1(t_tilde, ep))


def _efficiency_from(m, loss):
    m = np.asarray(m, dtype=float)
    if np.any(m == 0.0):
        raise UndefinedEfficiency("measurement ideality is 0: no heat is absorbed")
    return 1.0 - loss / m


def efficiency_stage1(t_tilde, ep: EngineParams):
    """eta = 1 - (1 - eta_C) / M(t), i.e. (1 - eta_C) / (1 - eta) = M saturated."""
    return _out(_efficiency_from(ideality(t_tilde, ep.alpha), 1.0 - ep.eta_c))


def _power1(t_tilde, ep):
    with np.errstate(divide="ignore"):  # -inf at t = 0: work is spent in no time
        return _work1(t_tilde, ep) / np.asarray(t_tilde, dtype=float)


def power_stage1(t_tilde, ep: EngineParams):
    """P = W / t_M with t_M = tau_M * t_tilde."""
    return _out(ep.t_h_energy * _power1(t_tilde, ep) / ep.tau_m)


def output_power(t_tilde, ep: EngineParams):
    """P_O = k_B T_H I(t) / t_M, the rate of the work-output stage alone."""
    t = np.asarray(t_tilde, dtype=float)
    return _out(ep.t_h_energy * np.asarray(mutual_info(t, ep.alpha)) / (ep.tau_m * t))


def performance_stage1(t_tilde: float, ep: EngineParams) -> Performance:
    m = float(ideality(t_tilde, ep.alpha))
    return Performance(
        work=float(work_stage1(t_tilde, ep)),
        heat_in=ep.t_h_energy * m * LN2,
        efficiency=float(efficiency_stage1(t_tilde, ep)) if m > 0 else math.nan,
        power=float(power_stage1(t_tilde, ep)),
    )


def threshold_time(ep: EngineParams, tol: float = ROOT_TOL, max_doublings: int = 64) -> float:
    """Dimensionless time t0 with M(t0) = 1 - eta_C; net work is positive iff t > t0."""
    target = 1.0 - ep.eta_c

    def gap(t):
        return float(ideality(t, ep.alpha)) - target

    hi = 1.0
    for _ in range(max_doublings):
        if gap(hi) > 0.0:
            break
        hi *= 2.0
    else:
        raise NoThreshold(
            f"ideality stays below 1 - eta_C = {target:.6g} up to t = {hi:.3g} (alpha = {ep.alpha})"
        )
    try:
        return find_root_monotone(gap, (0.0, hi), tol=tol)
    except NoSignChange as exc:  # pragma: no cover - gap(0) = -target < 0 always
        raise NoThreshold(str(exc)) from exc


def emp_stage1(ep: EngineParams, t_hi: float = 1e4, tol: float = OPT_TOL) -> EmpResult:
    """Maximum power over t in [t0, t_hi] and the efficiency there."""
    t0 = threshold_time(ep)
    if not t0 < t_hi:
        raise NoThreshold(f"threshold time {t0:.6g} is beyond the search limit {t_hi:.6g}")
    t_star, p_star = maximize_1d(lambda t: _power1(t, ep), (t0, t_hi), tol=tol, vectorized=True)
    return EmpResult(
        arg_times=CyclePoint(t_tilde=t_star),
        p_max=ep.t_h_energy * p_star / ep.tau_m,
        eta_mp=float(efficiency_stage1(t_star, ep)),
    )


# ---------------------------------------------------------------------------
# Regime B: finite-time measurement and erasing
# ---------------------------------------------------------------------------

def _erase_factor(t_e, dp):
    t_e = np.asarray(t_e, dtype=float)
    if dp.c_e == 0.0:
        return np.ones_like(t_e)
    return 1.0 + dp.c_e / t_e


def work_erase(t_e, ep: EngineParams, dp: DissipationParams):
    """Finite-time Landauer cost k_B T_C ln 2 (1 + C_E / t_E)."""
    return _out(ep.t_h_energy * (1.0 - ep.eta_c) * LN2 * _erase_factor(t_e, dp))


def _power2(t_tilde, t_e, ep, dp):
    m = np.asarray(ideality(t_tilde, ep.alpha))
    w = (m - (1.0 - ep.eta_c) * _erase_factor(t_e, dp)) * LN2
    return w / (np.asarray(t_tilde, dtype=float) * ep.tau_m + np.asarray(t_e, dtype=float))


def efficiency_two_time(t_tilde, t_e, ep: EngineParams, dp: DissipationParams):
    """eta = W / Q_O = 1 - (1 - eta_C)(1 + C_E / t_E) / M(t)."""
    loss = (1.0 - ep.eta_c) * _erase_factor(t_e, dp)
    return _out(_efficiency_from(ideality(t_tilde, ep.alpha), loss))


def power_two_time(t_tilde, t_e, ep: EngineParams, dp: DissipationParams):
    """P = [M ln2 - (1 - eta_C) ln2 (1 + C_E / t_E)] k_B T_H / (tau_M t + t_E)."""
    return _out(ep.t_h_energy * _power2(t_tilde, t_e, ep, dp))


def performance_two_time(t_tilde: float, t_e: float, ep: EngineParams, dp: DissipationParams) -> Performance:
    m = float(ideality(t_tilde, ep.alpha))
    w = ep.t_h_energy * (m * LN2 - (1.0 - ep.eta_c) * LN2 * float(_erase_factor(t_e, dp)))
    return Performance(
        work=w,
        heat_in=ep.t_h_energy * m * LN2,
        efficiency=float(efficiency_two_time(t_tilde, t_e, ep, dp)) if m > 0 else math.nan,
        power=float(power_two_time(t_tilde, t_e, ep, dp)),
    )


DEFAULT_TWO_TIME_BOX = ((1e-2, 1e3), (1e-2, 1e5))


def two_time_box(ep: EngineParams, box=DEFAULT_TWO_TIME_BOX):
    """Search box with the t-range clipped below at the threshold time.

    When the threshold lies beyond the box (or does not exist) no positive
    power is possible there and the box is returned unclipped.
    """
    (t_lo, t_hi), te = box
    try:
        t0 = threshold_time(ep)
    except NoThreshold:
        t0 = math.inf
    if t0 < t_hi:
        t_lo = max(t0, t_lo)
    return (t_lo, t_hi), tuple(te)


def emp_two_time(ep: EngineParams, dp: DissipationParams, box=DEFAULT_TWO_TIME_BOX, tol: float = OPT_TOL) -> EmpResult:
    """Maximum of P(t, t_E) over the box and the efficiency at the maximizer.

    With C_E = 0 the erasing time only lengthens the cycle, so the maximizer
    sits on the lower t_E edge of the box.
    """
    sbox = two_time_box(ep, box)
    (t_star, te_star), p_star = maximize_2d(
        lambda t, te: _power2(t, te, ep, dp), sbox, tol=tol, vectorized=True
    )
    return EmpResult(
        arg_times=CyclePoint(t_tilde=t_star, t_e=te_star),
        p_max=ep.t_h_energy * p_star,
        eta_mp=float(efficiency_two_time(t_star, te_star, ep, dp)),
    )


# Measurement and erasing windows for the exceedance map. With an open
# t-range a fast measurement (large alpha) leaves an erasing-dominated cycle
# whose EMP drops towards eta_C / 2, so the map is only meaningful at a
# bounded operation time.
EXCEED_BOX = ((1.0, 8.0), (1.0, 1e3))


def eta_c_cells(lo: float = 0.01, hi: float = 0.99, n: int = 200) -> tuple[np.ndarray, float]:
    """Centers and common width of ``n`` equal cells covering (lo, hi)."""
    h = (hi - lo) / n
    return lo + h * (np.arange(n) + 0.5), h


def exceed_flags(alpha: float, c_e: float, template: Optional[EngineParams] = None,
                 grid=(0.01, 0.99, 200), box=EXCEED_BOX, tol: float = 1e-6):
    """Per-cell (eta_C, eta_MP, exceeds) for the two-time regime."""
    base = template or EngineParams(eta_c=0.5, alpha=alpha)
    dp = DissipationParams(c_e=c_e, c_o=1.0)
    centers, _ = eta_c_cells(*grid)
    rows = []
    for eta_c in centers:
        ep = replace(base, eta_c=float(eta_c), alpha=alpha)
        if alpha == 0.0:
            rows.append((float(eta_c), math.nan, False))
            continue
        res = emp_two_time(ep, dp, box=box, tol=tol)
        rows.append((float(eta_c), res.eta_mp, bool(res.eta_mp > eta_plus(eta_c))))
    return rows


def exceed_width(alpha: float, c_e: float, template: Optional[EngineParams] = None,
                 grid=(0.01, 0.99, 200), box=EXCEED_BOX, tol: float = 1e-6) -> float:
    """Measure of the eta_C range where the two-time EMP beats eta_C / (2 - eta_C)."""
    _, h = eta_c_cells(*grid)
    flags = exceed_flags(alpha, c_e, template, grid, box, tol)
    return h * sum(1 for *_, hit in flags if hit)


# ---------------------------------------------------------------------------
# Regime C: ideal measurement, low-dissipation output and erasing
# ---------------------------------------------------------------------------

def work_output_lowdiss(t_o, ep: EngineParams, dp: DissipationParams):
    """W_O = k_B T_H ln 2 (1 - C_O / t_O)."""
    t_o = np.asarray(t_o, dtype=float)
    return _out(ep.t_h_energy * LN2 * (1.0 - dp.c_o / t_o))


def _power3(t_o, t_e, ep, dp):
    t_o = np.asarray(t_o, dtype=float)
    t_e = np.asarray(t_e, dtype=float)
    num = ep.eta_c - dp.c_o / t_o - (1.0 - ep.eta_c) * (dp.c_e / t_e if dp.c_e else 0.0)
    return LN2 * num / (t_o + t_e)


def power_carnot(t_o, t_e, ep: EngineParams, dp: DissipationParams):
    """P = [W_O(t_O) - W_E(t_E)] / (t_O + t_E)."""
    return _out(ep.t_h_energy * _power3(t_o, t_e, ep, dp))


def dissipation_ratio(ep: EngineParams, dp: DissipationParams) -> float:
    """Effective erasing/output dissipation ratio (T_C C_E) / (T_H C_O)."""
    if not dp.c_o > 0:
        raise ValueError("c_o must be > 0 in the Carnot-mapped regime")
    return (1.0 - ep.eta_c) * dp.c_e / dp.c_o


def optimal_times_carnot(ep: EngineParams, dp: DissipationParams) -> tuple[float, float]:
    """Stationary point (t_O*, t_E*) of the Carnot-mapped power.

    t_O* = (2 C_O / eta_C)(1 + sqrt(r)), t_E* = t_O* sqrt(r) with
    r = (1 - eta_C) C_E / C_O; the cold-bath weight comes from W_E being
    proportional to k_B T_C.
    """
    s = math.sqrt(dissipation_ratio(ep, dp))
    t_o = 2.0 * dp.c_o / ep.eta_c * (1.0 + s)
    return t_o, t_o * s


def emp_carnot(ep: EngineParams, dp: DissipationParams) -> CarnotEmp:
    """eta_MP = eta_C / (2 - kappa eta_C), kappa = 1 / (1 + sqrt(r))."""
    kappa = 1.0 / (1.0 + math.sqrt(dissipation_ratio(ep, dp)))
    return CarnotEmp(eta_mp=ep.eta_c / (2.0 - kappa * ep.eta_c), kappa=kappa)


def emp_carnot_direct(ep: EngineParams, dp: DissipationParams) -> float:
    """1 - W_E(t_E*) / W_O(t_O*), evaluated from the work expressions."""
    t_o, t_e = optimal_times_carnot(ep, dp)
    w_e = float(work_erase(t_e, ep, dp)) if t_e > 0 else ep.t_h_energy * (1.0 - ep.eta_c) * LN2
    return 1.0 - w_e / float(work_output_lowdiss(t_o, ep, dp))


def emp_bounds(eta_c):
    """(eta_C / 2, eta_C / (2 - eta_C))."""
    return _out(np.asarray(eta_c) / 2.0), eta_plus(eta_c)
