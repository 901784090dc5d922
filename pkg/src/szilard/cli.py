"""Command-line front end: every figure as CSV/JSON data, plus the oracle suite.

    szilard <subcommand> [flags]

Flags may also come from a ``key = value`` file given with ``--config``
(keys are flag names without the dashes, ``#`` starts a comment); flags on
the command line win. Exit status: 0 success, 2 bad configuration,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import BadFlag, BadValue, ConfigError, NoThreshold, NumericalError, UnknownKey
from .information import ideality_point
from .thermo import (
    DissipationParams,
    EngineParams,
    efficiency_two_time,
    emp_bounds,
    emp_carnot,
    emp_stage1,
    eta_curzon_ahlborn,
    eta_plus,
    exceed_width,
    output_power,
    performance_stage1,
    power_two_time,
    threshold_time,
)
from .tradeoff import cloud_arrays, curve_stage1, envelope_arrays
from .verify import run_checks, summary
from .wavepacket import SpinBranch, WavePacketParams, oracle_grid, psi_branch

SUBCOMMANDS = ("ideality", "wavepacket", "power", "threshold", "emp", "tradeoff", "twotime", "carnot", "verify")
MODES = {"tradeoff": ("curve", "cloud", "envelope"), "twotime": ("width", "surface")}


@dataclass(frozen=True)
class Grid:
    lo: float
    hi: float
    count: int

    def __str__(self):
        return f"{self.lo:.12g}:{self.hi:.12g}:{self.count}"

    def values(self, log: bool) -> np.ndarray:
        g = np.geomspace(self.lo, self.hi, self.count) if log else np.linspace(self.lo, self.hi, self.count)
        g[0], g[-1] = self.lo, self.hi
        return g


@dataclass(frozen=True)
class RunConfig:
    alpha: float = 0.4
    eta_c: float = 0.6
    c_e: float = 0.5
    c_o: float = 1.0
    t_min: Optional[float] = None  # None: per-subcommand default
    t_max: Optional[float] = None
    points: int = 400
    te_min: float = 1.0
    te_max: float = 400.0
    time: float = 3.0
    alpha_grid: Optional[Grid] = None
    eta_c_grid: Optional[Grid] = None
    c_e_grid: Optional[Grid] = None
    ratio_grid: Optional[Grid] = None
    mode: Optional[str] = None
    samples: int = 100_000
    bins: int = 200
    seed: int = 0
    out: Optional[str] = None
    format: str = "csv"

    def meta(self) -> dict:
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            out[f.name] = str(v) if isinstance(v, Grid) else v
        return out


GRID_KEYS = ("alpha_grid", "eta_c_grid", "c_e_grid", "ratio_grid")

# per-subcommand time range when --t-min / --t-max are absent
T_DEFAULTS = {
    "ideality": (0.1, 100.0),
    "power": (0.1, 1000.0),
    "tradeoff": (1.0, 1e5),
    "twotime": (1.0, 4.0),
}


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

def _flag(key: str) -> str:
    return key.replace("_", "-")


def _number(key, raw, kind=float):
    try:
        v = kind(raw)
    except (TypeError, ValueError):
        raise BadValue(f"--{_flag(key)}: expected a number, got {raw!r}") from None
    if kind is float and not math.isfinite(v):
        raise BadValue(f"--{_flag(key)}: expected a finite number, got {raw!r}")
    return v


def _grid(key, raw) -> Grid:
    parts = str(raw).split(":")
    if len(parts) != 3:
        raise BadValue(f"--{_flag(key)}: expected lo:hi:count, got {raw!r}")
    lo, hi = _number(key, parts[0]), _number(key, parts[1])
    n = _number(key, parts[2], int)
    if not lo < hi:
        raise BadValue(f"--{_flag(key)}: need lo < hi, got {raw!r}")
    if n < 2:
        raise BadValue(f"--{_flag(key)}: need count >= 2, got {raw!r}")
    return Grid(lo, hi, n)


def _check(key, ok, v, what):
    if not ok:
        raise BadValue(f"--{_flag(key)}: {v!r} {what}")


def _convert(key: str, raw) -> object:
    ints = {"points", "samples", "bins", "seed"}
    if key in GRID_KEYS:
        g = _grid(key, raw)
        if key == "eta_c_grid":
            _check(key, 0.0 < g.lo and g.hi <= 1.0, str(raw), "must lie in (0, 1]")
        elif key == "ratio_grid":
            _check(key, g.lo > 0.0, str(raw), "must be positive (log spacing)")
        else:
            _check(key, g.lo >= 0.0, str(raw), "must be non-negative")
        return g
    if key in ("out", "mode"):
        return str(raw)
    if key == "format":
        _check(key, raw in ("csv", "json"), raw, "must be csv or json")
        return raw
    v = _number(key, raw, int if key in ints else float)
    rules = {
        "alpha": (v >= 0, "must be >= 0"),
        "eta_c": (0 < v < 1, "must lie in (0, 1)"),
        "c_e": (v >= 0, "must be >= 0"),
        "c_o": (v > 0, "must be > 0"),
        "t_min": (v > 0, "must be > 0"),
        "t_max": (v > 0, "must be > 0"),
        "te_min": (v > 0, "must be > 0"),
        "te_max": (v > 0, "must be > 0"),
        "time": (v > 0, "must be > 0"),
        "points": (v >= 2, "must be >= 2"),
        "samples": (v >= 1, "must be >= 1"),
        "bins": (v >= 2, "must be >= 2"),
        "seed": (0 <= v < 2**64, "must lie in [0, 2^64)"),
    }
    ok, what = rules[key]
    _check(key, ok, v, what)
    return v


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise BadFlag(message)


def _option_parser() -> _Parser:
    p = _Parser(prog="szilard", add_help=False, allow_abbrev=False, argument_default=argparse.SUPPRESS)
    for f in fields(RunConfig):
        p.add_argument(f"--{_flag(f.name)}", dest=f.name)
    p.add_argument("--config", dest="config")
    return p


def read_config_file(path: str) -> dict:
    keys = {f.name for f in fields(RunConfig)}
    out = {}
    try:
        text = open(path, encoding="utf-8").read()
    except OSError as exc:
        raise BadValue(f"--config: cannot read {path!r}: {exc.strerror}") from None
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise BadValue(f"{path}:{n}: expected 'key = value', got {line!r}")
        k, v = (s.strip() for s in line.split("=", 1))
        key = k.replace("-", "_")
        if key not in keys:
            raise UnknownKey(f"{path}:{n}: unknown key {k!r}")
        out[key] = v
    return out


def parse_config(argv: Sequence[str], file: Optional[str] = None) -> RunConfig:
    """Resolve flags over an optional config file over the defaults."""
    ns = vars(_option_parser().parse_args(list(argv)))
    file = ns.pop("config", file)
    raw = read_config_file(file) if file else {}
    raw.update(ns)
    cfg = RunConfig(**{k: _convert(k, v) for k, v in raw.items()})
    if cfg.t_min is not None and cfg.t_max is not None and not cfg.t_min < cfg.t_max:
        raise BadValue(f"--t-min: {cfg.t_min!r} must be below --t-max {cfg.t_max!r}")
    if not cfg.te_min < cfg.te_max:
        raise BadValue(f"--te-min: {cfg.te_min!r} must be below --te-max {cfg.te_max!r}")
    return cfg


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def fmt(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".12g")


def _json_value(v):
    s = fmt(v)
    if isinstance(v, str):
        return v
    if s in ("nan", "inf", "-inf"):
        return None
    return int(s) if isinstance(v, (bool, np.bool_, int, np.integer)) else float(s)


def write_table(path: str, header: Sequence[str], rows, cfg: RunConfig, fmt_name: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        if fmt_name == "csv":
            fh.write(",".join(header) + "\n")
            for r in rows:
                fh.write(",".join(fmt(v) for v in r) + "\n")
        else:
            doc = {"meta": cfg.meta(), "rows": [dict(zip(header, map(_json_value, r))) for r in rows]}
            fh.write(json.dumps(doc, indent=1) + "\n")


def workers() -> int:
    raw = os.environ.get("SZILARD_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        raise BadValue(f"SZILARD_THREADS: expected an integer, got {raw!r}") from None
    if n < 0:
        raise BadValue(f"SZILARD_THREADS: must be >= 0, got {n}")
    return n or (os.cpu_count() or 1)


def pmap(fn: Callable, items: list) -> list:
    """Order-preserving map over a process pool capped by SZILARD_THREADS."""
    n = min(workers(), len(items))
    if n <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# subcommands: each returns (header, rows, summary pairs)
# ---------------------------------------------------------------------------

def _t_range(name, cfg):
    lo, hi = T_DEFAULTS.get(name, (0.1, 100.0))
    lo = cfg.t_min if cfg.t_min is not None else lo
    hi = cfg.t_max if cfg.t_max is not None else hi
    if not lo < hi:
        raise BadValue(f"--t-min: {lo!r} must be below --t-max {hi!r}")
    return lo, hi


def _t_grid(name, cfg) -> np.ndarray:
    return Grid(*_t_range(name, cfg), cfg.points).values(log=True)


def _engine(cfg, **kw) -> EngineParams:
    return EngineParams(eta_c=kw.get("eta_c", cfg.eta_c), alpha=kw.get("alpha", cfg.alpha))


def run_ideality(cfg):
    rows = []
    for t in _t_grid("ideality", cfg):
        pt = ideality_point(float(t), cfg.alpha)
        rows.append((pt.t_tilde, pt.p, pt.ideality, pt.mutual_info))
    last = rows[-1]
    return ("t_tilde", "p", "ideality", "mutual_info_nats"), rows, [("t_tilde", last[0]), ("ideality", last[2])]


def run_wavepacket(cfg):
    p = WavePacketParams(f=cfg.alpha)
    x = oracle_grid(cfg.time, p, n=cfg.points)
    up = np.abs(psi_branch(x, cfg.time, SpinBranch.PLUS, p))
    dn = np.abs(psi_branch(x, cfg.time, SpinBranch.MINUS, p))
    rows = list(zip(x, up, dn))
    k = int(np.argmax(up))
    return ("x", "abs_psi_plus", "abs_psi_minus"), rows, [("x_peak_plus", x[k]), ("abs_psi_plus_peak", up[k])]


def run_power(cfg):
    ep = _engine(cfg)
    rows = []
    for t in _t_grid("power", cfg):
        perf = performance_stage1(float(t), ep)
        po = float(output_power(float(t), ep))
        rows.append((float(t), perf.work, perf.efficiency, perf.power, po, perf.positive_work))
    k = max(range(len(rows)), key=lambda i: rows[i][3])
    header = ("t_tilde", "work", "efficiency", "power", "output_power", "positive_work")
    return header, rows, [("t_tilde", rows[k][0]), ("power", rows[k][3]), ("efficiency", rows[k][2])]


def _threshold_cell(args):
    alpha, eta_c = args
    if eta_c >= 1.0:
        return 0.0  # any record at all beats a vanishing erasure cost
    try:
        return threshold_time(EngineParams(eta_c=eta_c, alpha=alpha))
    except NoThreshold:
        return math.nan


def run_threshold(cfg):
    alphas = cfg.alpha_grid.values(log=False) if cfg.alpha_grid else np.array([cfg.alpha])
    etas = cfg.eta_c_grid.values(log=False) if cfg.eta_c_grid else np.array([cfg.eta_c])
    cells = [(float(a), float(e)) for a in alphas for e in etas]
    t0 = pmap(_threshold_cell, cells) if len(cells) > 64 else [_threshold_cell(c) for c in cells]
    rows = [(a, e, t) for (a, e), t in zip(cells, t0)]
    return ("alpha", "eta_c", "t0"), rows, [("alpha", rows[0][0]), ("eta_c", rows[0][1]), ("t0", rows[0][2])]


def _emp_cell(args):
    alpha, eta_c = args
    res = emp_stage1(EngineParams(eta_c=eta_c, alpha=alpha))
    return (eta_c, res.arg_times.t_tilde, res.p_max, res.eta_mp, float(eta_plus(eta_c)))


def run_emp(cfg):
    etas = cfg.eta_c_grid.values(log=False) if cfg.eta_c_grid else np.array([cfg.eta_c])
    if np.any(etas >= 1.0):
        raise BadValue("--eta-c-grid: eta_c = 1 has no finite maximum-power time; use hi < 1")
    rows = pmap(_emp_cell, [(cfg.alpha, float(e)) for e in etas])
    k = max(range(len(rows)), key=lambda i: rows[i][3] - rows[i][4])
    pairs = [("eta_c", rows[k][0]), ("t_star", rows[k][1]), ("p_max", rows[k][2]), ("eta_mp", rows[k][3])]
    return ("eta_c", "t_star", "p_max", "eta_mp", "eta_plus"), rows, pairs


def run_tradeoff(cfg):
    ep = _engine(cfg)
    mode = cfg.mode or "curve"
    if mode == "curve":
        pts = curve_stage1(ep, _t_grid("tradeoff", cfg))
        rows = [(p.p_norm, p.eta_norm, p.source.t_tilde) for p in pts]
        k = max(range(len(rows)), key=lambda i: rows[i][0])
        pairs = [("t_star", rows[k][2]), ("eta_norm_at_p_max", rows[k][1])]
        return ("p_norm", "eta_norm", "t_tilde"), rows, pairs
    box = (_t_range("twotime", cfg), (cfg.te_min, cfg.te_max))
    cloud = cloud_arrays(ep, DissipationParams(c_e=cfg.c_e, c_o=cfg.c_o), cfg.samples, box=box, seed=cfg.seed)
    if mode == "cloud":
        rows = list(zip(cloud.p_norm, cloud.eta_norm, cloud.t_tilde, cloud.t_e))
        return ("p_norm", "eta_norm", "t_tilde", "t_e"), rows, [("points", len(rows)), ("p_max", cloud.p_max)]
    env = envelope_arrays(cloud.p_norm, cloud.eta_norm, bins=cfg.bins)
    counts = np.bincount(env.bin_index(cloud.p_norm), minlength=env.bin_count)[env.index]
    rows = list(zip(env.p_norm, env.eta_lo, env.eta_hi, counts))
    pairs = [("points", len(cloud)), ("p_max", cloud.p_max), ("eta_hi_top", rows[0][2])]
    return ("p_norm", "eta_lo", "eta_hi", "count"), rows, pairs


def _width_cell(args):
    alpha, c_e, grid = args
    return exceed_width(alpha, c_e, grid=grid)


def run_twotime(cfg):
    mode = cfg.mode or "width"
    if mode == "surface":
        ep, dp = _engine(cfg), DissipationParams(c_e=cfg.c_e, c_o=cfg.c_o)
        ts = _t_grid("twotime", cfg)
        tes = Grid(cfg.te_min, cfg.te_max, cfg.points).values(log=True)
        rows = []
        for t in ts:
            eta = np.asarray(efficiency_two_time(t, tes, ep, dp))
            pw = np.asarray(power_two_time(t, tes, ep, dp))
            rows.extend(zip(np.full_like(tes, t), tes, eta, pw))
        k = max(range(len(rows)), key=lambda i: rows[i][3])
        pairs = [("t_tilde", rows[k][0]), ("t_e", rows[k][1]), ("power", rows[k][3])]
        return ("t_tilde", "t_e", "efficiency", "power"), rows, pairs
    alphas = cfg.alpha_grid.values(log=False) if cfg.alpha_grid else np.array([cfg.alpha])
    ces = cfg.c_e_grid.values(log=False) if cfg.c_e_grid else np.array([cfg.c_e])
    cell = (0.01, 0.99, 200)
    if cfg.eta_c_grid:
        cell = (cfg.eta_c_grid.lo, min(cfg.eta_c_grid.hi, 0.999), cfg.eta_c_grid.count)
    items = [(float(a), float(c), cell) for a in alphas for c in ces]
    widths = pmap(_width_cell, items)
    rows = [(a, c, w) for (a, c, _), w in zip(items, widths)]
    k = max(range(len(rows)), key=lambda i: rows[i][2])
    return ("alpha", "c_e", "exceed_width"), rows, [("alpha", rows[k][0]), ("c_e", rows[k][1]), ("exceed_width", rows[k][2])]


def run_carnot(cfg):
    grid = cfg.ratio_grid or Grid(1e-4, 1e4, 50)
    ep = _engine(cfg)
    lo, hi = emp_bounds(cfg.eta_c)
    ca = eta_curzon_ahlborn(cfg.eta_c)
    rows = []
    for r in grid.values(log=True):
        res = emp_carnot(ep, DissipationParams(c_e=float(r) * cfg.c_o, c_o=cfg.c_o))
        rows.append((float(r), res.kappa, res.eta_mp, lo, hi, ca))
    k = min(range(len(rows)), key=lambda i: abs(math.log(rows[i][0])))
    header = ("ratio_ce_co", "kappa", "eta_mp", "eta_lower", "eta_upper", "eta_ca")
    return header, rows, [("ratio_ce_co", rows[k][0]), ("kappa", rows[k][1]), ("eta_mp", rows[k][2])]


def run_verify(cfg):
    checks = run_checks()
    rows = [(c.name, c.value, c.tol, c.passed) for c in checks]
    ok, bad = summary(checks)
    return ("check", "discrepancy", "tolerance", "passed"), rows, [("passed", ok), ("failed", bad)]


RUNNERS = {
    "ideality": run_ideality,
    "wavepacket": run_wavepacket,
    "power": run_power,
    "threshold": run_threshold,
    "emp": run_emp,
    "tradeoff": run_tradeoff,
    "twotime": run_twotime,
    "carnot": run_carnot,
    "verify": run_verify,
}


def run_subcommand(name: str, cfg: RunConfig) -> int:
    if name not in RUNNERS:
        raise BadFlag(f"unknown subcommand {name!r}; choose from {', '.join(SUBCOMMANDS)}")
    if cfg.mode is not None and cfg.mode not in MODES.get(name, ()):
        allowed = ", ".join(MODES.get(name, ())) or "none"
        raise BadValue(f"--mode: {cfg.mode!r} is not a mode of {name} (allowed: {allowed})")
    header, rows, pairs = RUNNERS[name](cfg)
    out = cfg.out or f"{name}.{cfg.format}"
    write_table(out, header, rows, cfg, cfg.format)
    print(f"{name}: " + " ".join(f"{k}={fmt(v)}" for k, v in pairs) + f" rows={len(rows)} -> {out}")
    if name == "verify":
        return 0 if pairs[1][1] == 0 else 1
    return 0


def _usage() -> str:
    return (
        "usage: szilard {" + ",".join(SUBCOMMANDS) + "} [--flag value ...]\n"
        "flags: " + " ".join(f"--{_flag(f.name)}" for f in fields(RunConfig)) + " --config FILE\n"
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv or argv[0] in ("-h", "--help"):
        sys.stdout.write(_usage())
        return 0 if argv else 2
    name, rest = argv[0], argv[1:]
    try:
        if name not in SUBCOMMANDS:
            raise BadFlag(f"unknown subcommand {name!r}; choose from {', '.join(SUBCOMMANDS)}")
        cfg = parse_config(rest)
        return run_subcommand(name, cfg)
    except ConfigError as exc:
        print(f"szilard: error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"szilard: numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
