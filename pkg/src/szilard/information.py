"""Which-way information recorded by the demon after a finite measurement time.

The demon reads the spin perfectly, so the demon/position channel is a binary
symmetric channel with uniform input and crossover 1 - p(t).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numerics import erf

LN2 = math.log(2.0)

# below this |erf| the entropy series is used instead of log1p
_SERIES_CUTOFF = 1e-3


def _out(a):
    a = np.asarray(a)
    return a.item() if a.ndim == 0 else a


def _erf_argument(t_tilde, alpha):
    t = np.asarray(t_tilde, dtype=float)
    return alpha * t * t / np.sqrt(2.0 * t * t + 8.0)


def p_of_t(t_tilde, alpha):
    """Probability that the spin-inferred side is the actual side."""
    return _out(0.5 * (1.0 + np.asarray(erf(_erf_argument(t_tilde, alpha)))))


def _info_from_erf(e):
    """ln2 + p ln p + q ln q with p = (1+e)/2, q = (1-e)/2, in nats.

    Rewritten as [(1+e) log1p(e) + (1-e) log1p(-e)] / 2 so that nothing
    cancels against ln 2 as p -> 1/2; the even series takes over for tiny e.
    """
    e = np.abs(np.asarray(e, dtype=float))
    out = np.empty_like(e)
    small = e < _SERIES_CUTOFF
    es = e[small] ** 2
    # sum_k e^(2k) / (2k (2k - 1))
    out[small] = es * (0.5 + es * (1.0 / 12.0 + es * (1.0 / 30.0 + es / 56.0)))
    el = e[~small]
    q = 1.0 - el
    with np.errstate(divide="ignore", invalid="ignore"):
        tail = np.where(q > 0.0, q * np.log1p(-el), 0.0)  # 0 ln 0 := 0
    out[~small] = 0.5 * ((1.0 + el) * np.log1p(el) + tail)
    return out


def mutual_info(t_tilde, alpha):
    """Demon/position mutual information I(t) in nats; I = M ln 2."""
    e = erf(_erf_argument(t_tilde, alpha))
    return _out(_info_from_erf(e))


def ideality(t_tilde, alpha):
    """Measurement ideality M = I / ln 2, from 0 (no record) to 1 (ideal)."""
    return _out(np.asarray(mutual_info(t_tilde, alpha)) / LN2)


def ideality_long_time(t_tilde, alpha):
    """Leading behaviour for alpha * t >~ 2: 1 - [1 - erf(alpha t)] / (2 ln 2)."""
    t = np.asarray(t_tilde, dtype=float)
    return _out(1.0 - (1.0 - np.asarray(erf(alpha * t))) / (2.0 * LN2))


def ideality_short_time(t_tilde, alpha):
    """Quartic onset alpha^2 t^4 / (4 pi ln 2) for t << 1.

    From p - 1/2 ~ alpha t^2 / (2 sqrt(2 pi)) and I ~ 2 (p - 1/2)^2.
    """
    t = np.asarray(t_tilde, dtype=float)
    return _out(alpha**2 * t**4 / (4.0 * math.pi * LN2))


@dataclass(frozen=True)
class IdealityPoint:
    t_tilde: float
    p: float
    ideality: float
    mutual_info: float


def ideality_point(t_tilde: float, alpha: float) -> IdealityPoint:
    info = float(mutual_info(t_tilde, alpha))
    return IdealityPoint(
        t_tilde=float(t_tilde),
        p=float(p_of_t(t_tilde, alpha)),
        ideality=info / LN2,
        mutual_info=info,
    )
