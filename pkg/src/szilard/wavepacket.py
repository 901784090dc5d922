"""Stern-Gerlach spatial dynamics of a spin-1/2 Gaussian packet in a linear field.

The two spin branches see the potentials -f x (spin up, ``PLUS``) and +f x
(spin down, ``MINUS``). Closed forms are paired with quadrature oracles that
share none of their algebra: the oracles integrate the propagator against the
initial packet, or integrate the closed-form amplitudes directly.

Superposition coefficients are fixed to c+ = c- = 1/sqrt(2).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .numerics import QUAD_TOL, integrate

# tails of |psi|^2 beyond this many standard deviations carry < 1e-30 mass
TAIL_SIGMAS = 12.0


class ZeroTime(ValueError):
    """The propagator is a delta distribution at t = 0."""


class SpinBranch(enum.Enum):
    PLUS = 1
    MINUS = -1

    @property
    def sign(self) -> int:
        return self.value

    @property
    def coefficient(self) -> float:
        return 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class MeasurementParams:
    """Dimensionless decoherence strength and the characteristic time m a^2 / hbar."""

    alpha: float
    tau_m: float = 1.0

    def __post_init__(self):
        if not self.alpha >= 0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha}")
        if not self.tau_m > 0:
            raise ValueError(f"tau_m must be > 0, got {self.tau_m}")

    @classmethod
    def from_wavepacket(cls, p: "WavePacketParams") -> "MeasurementParams":
        return cls(alpha=p.alpha, tau_m=p.tau_m)

    def t_tilde(self, t):
        return np.asarray(t) / self.tau_m


@dataclass(frozen=True)
class WavePacketParams:
    m: float = 1.0
    a: float = 1.0
    hbar: float = 1.0
    f: float = 0.0

    def __post_init__(self):
        for name in ("m", "a", "hbar"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0, got {getattr(self, name)}")
        if not self.f >= 0:
            raise ValueError(f"f must be >= 0, got {self.f}")

    @property
    def alpha(self) -> float:
        return self.m * self.a**3 * self.f / self.hbar**2

    @property
    def tau_m(self) -> float:
        return self.m * self.a**2 / self.hbar

    def measurement(self) -> MeasurementParams:
        return MeasurementParams.from_wavepacket(self)

    def center(self, t, branch: SpinBranch = SpinBranch.PLUS):
        return branch.sign * self.f * np.asarray(t) ** 2 / (2.0 * self.m)

    def width(self, t):
        """Standard deviation of |psi(x, t)|^2."""
        s = self.hbar * np.asarray(t) / (2.0 * self.m * self.a**2)
        return self.a * np.sqrt(1.0 + s * s)


def psi_initial(x, p: WavePacketParams):
    """(1 / 2 pi a^2)^(1/4) exp(-x^2 / 4 a^2), as a complex amplitude."""
    x = np.asarray(x, dtype=float)
    norm = (2.0 * math.pi * p.a**2) ** -0.25
    return (norm * np.exp(-(x * x) / (4.0 * p.a**2))).astype(complex)


def propagator(x, x_prime, t, branch: SpinBranch, p: WavePacketParams):
    """Kernel <x| exp(-i H t / hbar) |x'> for H = p^2/2m - sign * f x."""
    if t == 0:
        raise ZeroTime("propagator is distributional at t = 0; use psi_initial")
    if t < 0:
        raise ValueError("t must be positive")
    x = np.asarray(x, dtype=float)
    xp = np.asarray(x_prime, dtype=float)
    m, hb, f = p.m, p.hbar, p.f
    pref = np.sqrt(m / (2j * math.pi * hb * t))
    phase = (
        m * (x - xp) ** 2 / (2.0 * hb * t)
        + branch.sign * f * (x + xp) * t / (2.0 * hb)
        - f * f * t**3 / (24.0 * hb * m)
    )
    return pref * np.exp(1j * phase)


def psi_branch(x, t, branch: SpinBranch, p: WavePacketParams):
    """Closed-form spin-conditioned amplitude psi_+-(x, t)."""
    if t < 0:
        raise ValueError("t must be >= 0")
    x = np.asarray(x, dtype=float)
    m, a, hb, f = p.m, p.a, p.hbar, p.f
    s = branch.sign
    w = a * a + 1j * hb * t / (2.0 * m)
    pref = (a * a / (2.0 * math.pi)) ** 0.25 / np.sqrt(w)
    expo = (
        -1j * f * f * t**3 / (6.0 * hb * m)
        - (x - s * f * t * t / (2.0 * m)) ** 2 / (4.0 * w)
        + s * 1j * f * t * x / hb
    )
    return pref * np.exp(expo)


def overlap_closed(t_tilde, mp: MeasurementParams):
    """F = |<psi+|psi->| = exp[-(2 alpha^2 t^2 + alpha^2 t^4 / 8)] in dimensionless time."""
    t = np.asarray(t_tilde, dtype=float)
    a2 = mp.alpha**2
    out = np.exp(-(2.0 * a2 * t * t + a2 * t**4 / 8.0))
    return out.item() if out.ndim == 0 else out


def oracle_grid(t, p: WavePacketParams, n: int = 4096) -> np.ndarray:
    """Grid covering both displaced packets: [-15a - d, 15a + d], d = f t^2 / 2m."""
    d = abs(float(p.center(t)))
    return np.linspace(-15.0 * p.a - d, 15.0 * p.a + d, n)


def psi_branch_numeric(x, t, branch: SpinBranch, p: WavePacketParams, tol: float = 1e-9):
    """psi_+-(x, t) as the quadrature of propagator * psi_initial over x'.

    Vectorized over ``x``; the x' range is truncated where the initial
    Gaussian envelope is below double precision.
    """
    if t == 0:
        return psi_initial(x, p)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    half = TAIL_SIGMAS * p.a

    def integrand(xp):
        return propagator(x, xp, t, branch, p) * psi_initial(xp, p)

    return integrate(integrand, (-half, half), tol=tol)


def _window(t, p: WavePacketParams):
    d = abs(float(p.center(t)))
    return d + TAIL_SIGMAS * float(p.width(t))


def overlap_numeric(t, p: WavePacketParams, tol: float = 1e-12) -> float:
    """|integral psi_+^*(x, t) psi_-(x, t) dx| by adaptive quadrature."""
    half = _window(t, p)

    def integrand(x):
        return np.conj(psi_branch(x, t, SpinBranch.PLUS, p)) * psi_branch(x, t, SpinBranch.MINUS, p)

    return float(abs(integrate(integrand, (-half, half), tol=tol)))


def half_line_probability_numeric(t, branch: SpinBranch, p: WavePacketParams, tol: float = 1e-12) -> float:
    """Probability that a branch lands on its own side: x > 0 for PLUS, x < 0 for MINUS."""
    half = _window(t, p)
    iv = (0.0, half) if branch is SpinBranch.PLUS else (-half, 0.0)

    def density(x):
        return abs(psi_branch(x, t, branch, p)) ** 2

    return float(integrate(density, iv, tol=tol))


def norm_numeric(t, branch: SpinBranch, p: WavePacketParams, tol: float = QUAD_TOL) -> float:
    half = _window(t, p)
    c = float(p.center(t, branch))
    return float(integrate(lambda x: abs(psi_branch(x, t, branch, p)) ** 2, (c - half, c + half), tol=tol))
