"""Oracle-equivalence suite: closed forms against quadrature, optimizers against scans.

Each check compares two computations that share no algebra and reports the
discrepancy next to the tolerance it must meet.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from .information import ideality, ideality_long_time, ideality_short_time, mutual_info, p_of_t
from .numerics import maximize_2d
from .thermo import (
    DissipationParams,
    EngineParams,
    emp_carnot,
    emp_carnot_direct,
    emp_stage1,
    optimal_times_carnot,
    power_carnot,
    power_stage1,
    threshold_time,
    work_stage1,
)
from .wavepacket import (
    MeasurementParams,
    SpinBranch,
    WavePacketParams,
    half_line_probability_numeric,
    norm_numeric,
    oracle_grid,
    overlap_closed,
    overlap_numeric,
    psi_branch,
    psi_branch_numeric,
)

TIMES = (1.0, 3.0, 6.0)
FORCES = (0.5, 1.5)


@dataclass(frozen=True)
class Check:
    name: str
    value: float  # discrepancy (or ratio, for bound checks)
    tol: float
    passed: bool


def _abs(name, got, want, tol) -> Check:
    d = abs(got - want)
    return Check(name, d, tol, bool(d <= tol))


def _mutual_info_table() -> Iterator[Check]:
    table = {(0.5, 3.0): 0.355, (0.5, 6.0): 0.677, (1.5, 3.0): 0.692, (1.5, 6.0): 0.693}
    for (alpha, t), want in table.items():
        yield _abs(f"mutual_info alpha={alpha} t={t}", float(mutual_info(t, alpha)), want, 1e-3)


def _dynamics() -> Iterator[Check]:
    for f in FORCES:
        p = WavePacketParams(f=f)
        mp = MeasurementParams.from_wavepacket(p)
        for t in TIMES:
            x = oracle_grid(t, p)
            for br in SpinBranch:
                d = float(np.max(np.abs(psi_branch_numeric(x, t, br, p) - psi_branch(x, t, br, p))))
                yield Check(f"psi_branch vs propagator f={f} t={t} {br.name}", d, 1e-6, d <= 1e-6)
                yield _abs(f"norm f={f} t={t} {br.name}", norm_numeric(t, br, p), 1.0, 1e-10)
            yield _abs(f"overlap f={f} t={t}", overlap_closed(t, mp), overlap_numeric(t, p), 1e-8)
            yield _abs(
                f"p_of_t vs half-line f={f} t={t}",
                float(p_of_t(t, mp.alpha)),
                half_line_probability_numeric(t, SpinBranch.PLUS, p),
                1e-8,
            )


def _asymptotics() -> Iterator[Check]:
    for t in (1e-3, 3e-3, 1e-2):
        r = float(ideality(t, 0.4)) / float(ideality_short_time(t, 0.4))
        yield Check(f"short-time ratio t={t}", r, 0.01, abs(r - 1.0) <= 0.01)
    yield _abs("long-time ideality t=20", float(ideality(20.0, 0.5)), float(ideality_long_time(20.0, 0.5)), 1e-3)


def _threshold() -> Iterator[Check]:
    ep = EngineParams(eta_c=0.6, alpha=0.4)
    t0 = threshold_time(ep)
    grid = np.linspace(0.01, 20.0, 200_001)
    w = np.asarray(work_stage1(grid, ep))
    k = int(np.argmax(w > 0))
    h = grid[1] - grid[0]
    yield Check("threshold bisection vs grid scan", abs(t0 - grid[k]), h, grid[k - 1] <= t0 <= grid[k])
    yield _abs("threshold value alpha=0.4 eta_c=0.6", t0, 3.13, 0.02)


def _emp_stage1() -> Iterator[Check]:
    ep = EngineParams(eta_c=0.6, alpha=0.4)
    res = emp_stage1(ep)
    grid = np.geomspace(threshold_time(ep), 1e4, 1_000_001)
    p = np.asarray(power_stage1(grid, ep))
    k = int(np.argmax(p))
    rel = abs(res.arg_times.t_tilde - grid[k]) / grid[k]
    step = grid[k + 1] / grid[k] - 1.0
    yield Check("emp_stage1 argmax vs dense scan", rel, step, rel <= step)
    yield Check("emp_stage1 max vs dense scan", p[k] - res.p_max, 0.0, res.p_max >= p[k])


def _carnot() -> Iterator[Check]:
    for eta_c in (0.2, 0.5, 0.8):
        for c_e in (1e-2, 1.0, 1e2):
            ep, dp = EngineParams(eta_c=eta_c, alpha=1.0), DissipationParams(c_e=c_e, c_o=1.0)
            t_o, t_e = optimal_times_carnot(ep, dp)
            box = ((t_o / 20.0, t_o * 20.0), (t_e / 20.0, t_e * 20.0))
            (xo, xe), _ = maximize_2d(lambda a, b: power_carnot(a, b, ep, dp), box, vectorized=True)
            rel = max(abs(xo - t_o) / t_o, abs(xe - t_e) / t_e)
            yield Check(f"carnot times eta_c={eta_c} c_e={c_e}", rel, 1e-3, rel <= 1e-3)
            yield _abs(
                f"carnot eta_mp direct eta_c={eta_c} c_e={c_e}",
                emp_carnot(ep, dp).eta_mp,
                emp_carnot_direct(ep, dp),
                1e-12,
            )


SUITES: tuple[Callable[[], Iterator[Check]], ...] = (
    _mutual_info_table,
    _dynamics,
    _asymptotics,
    _threshold,
    _emp_stage1,
    _carnot,
)


def run_checks() -> list[Check]:
    out = []
    for suite in SUITES:
        out.extend(suite())
    return out


def summary(checks: list[Check]) -> tuple[int, int]:
    passed = sum(c.passed for c in checks)
    return passed, len(checks) - passed


if __name__ == "__main__":  # pragma: no cover
    cs = run_checks()
    for c in cs:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}: {c.value:.3e} (tol {c.tol:.1e})")
    ok, bad = summary(cs)
    print(f"{ok} passed, {bad} failed")
    raise SystemExit(0 if bad == 0 else 1)
