"""Adiabats with a constant adiabatic parameter mu = (d omega/dt) / omega^2.

The equations of motion are integrated in theta, where d theta = omega dt.
In that variable the frequency profile is omega(theta) = omega0 * exp(mu theta),
the noiseless part of the generator is constant and the noise entries scale
like gamma * omega(theta).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import DomainError, NoiseSpec, ObservableTriple, SegmentPropagator
from .integrate import integrate_linear

_NP_UNIT = -4.0 * np.diag([0.0, 1.0, 1.0])
_NA_UNIT = np.array([[1.0, -1.0, 0.0], [1.0, -1.0, 0.0], [0.0, 0.0, 0.0]])
CASIMIR_METRIC = np.diag([1.0, -1.0, -1.0])


@dataclass(frozen=True)
class AdiabatSpec:
    omega0: float
    omegaf: float
    mu: float
    noise: NoiseSpec = field(default_factory=NoiseSpec)

    def __post_init__(self):
        if not (self.omega0 > 0 and self.omegaf > 0):
            raise DomainError("adiabat frequencies must be positive")
        if not abs(self.mu) < 2:
            raise DomainError(f"|mu| must be below 2 (oscillatory branch), got {self.mu}")
        if self.omega0 == self.omegaf:
            if self.mu != 0:
                raise DomainError("a degenerate adiabat (omega0 == omegaf) needs mu = 0")
        elif self.mu == 0 or (self.mu > 0) != (self.omegaf > self.omega0):
            raise DomainError(
                f"mu={self.mu} cannot take omega from {self.omega0} to {self.omegaf}"
            )

    @classmethod
    def frictionless(cls, omega0: float, omegaf: float, n: int,
                     noise: NoiseSpec | None = None) -> "AdiabatSpec":
        """Adiabat whose mu closes n full periods of the noiseless motion."""
        return cls(omega0, omegaf, frictionless_mu(omega0, omegaf, n),
                   noise if noise is not None else NoiseSpec())

    @property
    def is_degenerate(self) -> bool:
        return self.omega0 == self.omegaf

    @property
    def big_omega(self) -> float:
        return math.sqrt(4.0 - self.mu * self.mu)

    @property
    def theta_final(self) -> float:
        if self.is_degenerate:
            return 0.0
        return math.log(self.omegaf / self.omega0) / self.mu

    @property
    def duration(self) -> float:
        if self.is_degenerate:
            return 0.0
        return (1.0 - self.omega0 / self.omegaf) / (self.mu * self.omega0)

    def omega_at_theta(self, theta: float) -> float:
        return self.omega0 * math.exp(self.mu * theta)

    def without_noise(self) -> "AdiabatSpec":
        return AdiabatSpec(self.omega0, self.omegaf, self.mu)


def _ratio_log(omega0, omegaf):
    return math.log(omega0 / omegaf)


def frictionless_mu(omega0: float, omegaf: float, n: int) -> float:
    if n < 1 or int(n) != n:
        raise DomainError(f"cycle index must be a positive integer, got {n!r}")
    ln_r = _ratio_log(omega0, omegaf)
    return -2.0 * ln_r / math.sqrt(4.0 * n * n * math.pi ** 2 + ln_r * ln_r)


def frictionless_tau(omega0: float, omegaf: float, n: int) -> float:
    if n < 1 or int(n) != n:
        raise DomainError(f"cycle index must be a positive integer, got {n!r}")
    if omega0 == omegaf:
        raise DomainError("frictionless time needs omega0 != omegaf")
    ln_r = _ratio_log(omega0, omegaf)
    root = math.sqrt(4.0 * n * n * math.pi ** 2 + ln_r * ln_r)
    return (omega0 / omegaf - 1.0) * root / (2.0 * omega0 * ln_r)


def omega_profile(spec: AdiabatSpec, t: float) -> float:
    tau = spec.duration
    if t < 0 or t > tau * (1 + 1e-12):
        raise DomainError(f"t={t} outside the segment [0, {tau}]")
    denom = 1.0 - spec.mu * spec.omega0 * t
    if denom <= 0:
        raise DomainError("frequency profile pole reached")
    return spec.omega0 / denom


def noiseless_generator(mu: float) -> np.ndarray:
    return np.array([[mu, -mu, 0.0], [-mu, mu, -2.0], [0.0, 2.0, mu]])


def _noise_unit(noise: NoiseSpec) -> np.ndarray:
    return noise.gamma_p * _NP_UNIT + noise.gamma_a * _NA_UNIT


def adiabat_generator(spec: AdiabatSpec, t: float) -> np.ndarray:
    """Matrix M with dA/(omega dt) = M A at time t on the adiabat."""
    omega = omega_profile(spec, t)
    return noiseless_generator(spec.mu) + omega * _noise_unit(spec.noise)


def theta_generator(spec: AdiabatSpec):
    """Generator as a function of theta, for the integrator."""
    m0 = noiseless_generator(spec.mu)
    if spec.noise.is_zero:
        return lambda theta: m0
    unit = _noise_unit(spec.noise)
    w0, mu = spec.omega0, spec.mu
    return lambda theta: m0 + (w0 * math.exp(mu * theta)) * unit


def propagate_adiabat_numeric(spec: AdiabatSpec, tol: float = 1e-10,
                              method: str = "dop853") -> SegmentPropagator:
    if spec.is_degenerate:
        return SegmentPropagator.identity()
    res = integrate_linear(theta_generator(spec), 0.0, spec.theta_final, np.eye(3),
                           tol=tol, method=method)
    return SegmentPropagator(res.y)


def adiabat_trace(spec: AdiabatSpec, initial: ObservableTriple, n_points: int = 101,
                  tol: float = 1e-10, method: str = "dop853"):
    """Sample the triple along the adiabat at evenly spaced theta.

    Returns ``(theta, omega, states)`` with ``states`` of shape (n_points, 3).
    """
    if n_points < 2:
        raise ValueError("need at least two trace points")
    theta = np.linspace(0.0, spec.theta_final, n_points)
    a0 = initial.as_array()
    # integrate in units of the initial energy so tol is meaningful
    scale = float(np.max(np.abs(a0))) or 1.0
    res = integrate_linear(theta_generator(spec), 0.0, spec.theta_final, a0 / scale,
                           tol=tol, checkpoints=list(theta[1:-1]), method=method)
    states = scale * np.vstack([a0 / scale] + [y for _, y in res.checkpoints] + [res.y])
    omega = spec.omega0 * np.exp(spec.mu * theta)
    omega[-1] = spec.omegaf
    return theta, omega, states


def u2_matrix(mu: float, theta: float) -> np.ndarray:
    if not abs(mu) < 2:
        raise DomainError(f"|mu| must be below 2, got {mu}")
    big = math.sqrt(4.0 - mu * mu)
    c = math.cos(big * theta)
    s = math.sin(big * theta)
    m = np.array([
        [4.0 - c * mu * mu, -mu * big * s, -2.0 * mu * (c - 1.0)],
        [-mu * big * s, big * big * c, -2.0 * big * s],
        [2.0 * mu * (c - 1.0), 2.0 * big * s, 4.0 * c - mu * mu],
    ])
    return m / (big * big)


def analytic_U1_U2(spec: AdiabatSpec, theta: float | None = None) -> SegmentPropagator:
    """Closed-form noiseless propagator U1 U2, at the segment end by default."""
    if not spec.noise.is_zero:
        raise DomainError("the closed form only covers noiseless adiabats")
    if theta is None:
        theta = spec.theta_final
    u1 = math.exp(spec.mu * theta)
    return SegmentPropagator(u1 * u2_matrix(spec.mu, theta))


def adiabaticity_delta(u_hc: SegmentPropagator | np.ndarray, omega0: float,
                       omegaf: float) -> float:
    m = u_hc.matrix if isinstance(u_hc, SegmentPropagator) else np.asarray(u_hc)
    return (omega0 / omegaf) * float(m[0, 0]) - 1.0
