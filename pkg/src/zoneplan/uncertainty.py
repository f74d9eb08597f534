"""
Speed and direction error models: truncated-normal densities, error bounds
and seeded sampling.

Speed errors live on [-v, inf) (an object cannot move backwards faster
than its expected speed); direction errors on [-pi, pi). An object that was
at rest has a uniform direction density.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr, ndtri

SIGMA_FLOOR = 1e-3
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def erf(x: float) -> float:
    """Gaussian error function, 2/sqrt(pi) * integral_0^x exp(-t^2) dt."""
    if x < 0:
        return -math.erf(-x)
    return math.erf(x)


def _phi(z):
    return _INV_SQRT_2PI * np.exp(-0.5 * np.square(z))


def _Phi(z: float) -> float:
    return 0.5 * (1.0 + erf(z / math.sqrt(2.0)))


@dataclass(frozen=True)
class SpeedErrorModel:
    """Error on the speed value; ``sigma_v == 0`` is a point mass (deterministic)."""

    expected_speed: float
    sigma_v: float

    def __post_init__(self):
        if self.expected_speed < 0 or not math.isfinite(self.expected_speed):
            raise ValueError(f"expected_speed must be finite and >= 0, got {self.expected_speed}")
        if self.sigma_v < 0 or not math.isfinite(self.sigma_v):
            raise ValueError(f"sigma_v must be finite and >= 0, got {self.sigma_v}")

    @property
    def deterministic(self) -> bool:
        return self.sigma_v == 0.0

    @property
    def lower(self) -> float:
        return -self.expected_speed

    def mass(self) -> float:
        """Normal mass above the truncation point, in units of the untruncated density."""
        return 1.0 - _Phi(self.lower / self.sigma_v)

    def cdf(self, x: float) -> float:
        if x < self.lower:
            return 0.0
        s = self.sigma_v
        lo = _Phi(self.lower / s)
        return (_Phi(x / s) - lo) / (1.0 - lo)

    def mean(self) -> float:
        s = self.sigma_v
        a = self.lower / s
        return s * float(_phi(a)) / self.mass()


@dataclass(frozen=True)
class DirectionErrorModel:
    """Error on the heading. ``moving=False`` means uniform over the full turn."""

    expected_direction: float
    sigma_d: float
    moving: bool = True

    def __post_init__(self):
        if self.sigma_d < 0 or not math.isfinite(self.sigma_d):
            raise ValueError(f"sigma_d must be finite and >= 0, got {self.sigma_d}")
        object.__setattr__(self, "expected_direction", float(self.expected_direction) % (2 * math.pi))

    @property
    def deterministic(self) -> bool:
        return self.moving and self.sigma_d == 0.0

    def mass(self) -> float:
        z = math.pi / self.sigma_d
        return _Phi(z) - _Phi(-z)

    def cdf(self, x: float) -> float:
        if not self.moving:
            return min(max((x + math.pi) / (2 * math.pi), 0.0), 1.0)
        if x < -math.pi:
            return 0.0
        if x >= math.pi:
            return 1.0
        s = self.sigma_d
        return (_Phi(x / s) - _Phi(-math.pi / s)) / self.mass()


def speed_error_pdf(m: SpeedErrorModel, x: float) -> float:
    """Truncated normal density (mean 0, sd sigma_v) on [-v, inf); 0 below -v."""
    if x < m.lower:
        return 0.0
    if m.deterministic:
        return math.inf if x == 0.0 else 0.0
    s = m.sigma_v
    return float(_phi(x / s)) / (s * m.mass())


def direction_error_pdf(m: DirectionErrorModel, x: float) -> float:
    """Heading error density.

    A resting object has the constant density 1/(2*pi) for any angle. A
    moving one has a truncated normal on [-pi, pi) and zero outside it.
    """
    if not m.moving:
        return 1.0 / (2.0 * math.pi)
    if x < -math.pi or x >= math.pi:
        return 0.0
    if m.deterministic:
        return math.inf if x == 0.0 else 0.0
    s = m.sigma_d
    return float(_phi(x / s)) / (s * m.mass())


def error_bounds(m_v: SpeedErrorModel, m_d: DirectionErrorModel, confidence_z: float) -> tuple[float, float]:
    """Half-widths (dv, dtheta) of the error band at ``confidence_z`` standard deviations.

    The speed bound is one-sided upward; the lower side is cut at -v by the
    density itself. A resting object may head anywhere, so its angular bound
    is pi. Deterministic models give (0, 0).
    """
    if confidence_z <= 0:
        raise ValueError("confidence_z must be positive")
    dv = 0.0 if m_v.deterministic else confidence_z * m_v.sigma_v
    if not m_d.moving:
        dtheta = math.pi
    elif m_d.deterministic:
        dtheta = 0.0
    else:
        dtheta = min(confidence_z * m_d.sigma_d, math.pi)
    return dv, dtheta


class RngStream:
    """Seeded random stream; equal seeds give equal draw sequences.

    Independent runs should each use :meth:`spawn` with their run index
    rather than sharing one stream.
    """

    def __init__(self, seed: int, run_index: int | None = None):
        self.seed = int(seed) & 0xFFFFFFFFFFFFFFFF
        key = () if run_index is None else (int(run_index),)
        self.generator = np.random.Generator(np.random.PCG64(np.random.SeedSequence(self.seed, spawn_key=key)))

    def spawn(self, run_index: int) -> "RngStream":
        return RngStream(self.seed, run_index)

    def uniform(self, size=None):
        return self.generator.random(size)

    def normal(self, size=None):
        return self.generator.standard_normal(size)

    def dirichlet(self, n: int) -> np.ndarray:
        return self.generator.dirichlet(np.ones(n))


def sample_speed_error(m: SpeedErrorModel, u) -> np.ndarray:
    """Inverse-CDF transform of uniforms ``u`` into speed errors (>= -v)."""
    if m.deterministic:
        return np.zeros_like(np.asarray(u, dtype=float))
    s = m.sigma_v
    # -dv/s is a standard normal truncated above at v/s
    top = ndtr(m.expected_speed / s)
    y = ndtri(np.asarray(u) * top)
    return np.maximum(-s * y, m.lower)


def sample_direction_error(m: DirectionErrorModel, u) -> np.ndarray:
    """Inverse-CDF transform of uniforms ``u`` into heading errors in [-pi, pi)."""
    u = np.asarray(u, dtype=float)
    if not m.moving:
        return -math.pi + 2.0 * math.pi * u
    if m.deterministic:
        return np.zeros_like(u)
    s = m.sigma_d
    lo = ndtr(-math.pi / s)
    hi = ndtr(math.pi / s)
    x = s * ndtri(lo + u * (hi - lo))
    return np.clip(x, -math.pi, np.nextafter(math.pi, 0.0))


def sample_errors(m_v: SpeedErrorModel, m_d: DirectionErrorModel, rng: RngStream, size=None):
    """Draw (speed error, heading error); scalars when ``size`` is None."""
    u = rng.uniform(size)
    w = rng.uniform(size)
    dv = sample_speed_error(m_v, u)
    dth = sample_direction_error(m_d, w)
    if size is None:
        return float(dv), float(dth)
    return dv, dth


def estimate_sigma(residuals, floor: float = SIGMA_FLOOR) -> float | None:
    """Sample standard deviation of residuals, floored; None with fewer than two."""
    r = np.asarray(residuals, dtype=float)
    if len(r) < 2:
        return None
    return max(float(np.std(r, ddof=1)), floor)
