"""Constants, state types and thermal-state helpers for the oscillator medium.

Energies are in joules, frequencies in rad/s, temperatures in kelvin.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

HBAR = 1.054571817e-34  # J s
KB = 1.380649e-23  # J / K

_COTH_SERIES_CUTOFF = 1e-8


class DomainError(ValueError):
    """Raised when an argument lies outside the domain of a formula."""


class SingularStateError(ArithmeticError):
    """Raised when a triple cannot be mapped back to Lagrange multipliers."""


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float = HBAR
    kB: float = KB

    def __post_init__(self):
        if not (self.hbar > 0 and self.kB > 0):
            raise DomainError("physical constants must be positive")


CODATA = PhysicalConstants()


@dataclass(frozen=True)
class ObservableTriple:
    """Expectation values <H>, <L>, <D> of the working medium (J)."""

    h: float
    l: float
    d: float

    def as_array(self) -> np.ndarray:
        return np.array([self.h, self.l, self.d], dtype=float)

    @classmethod
    def from_array(cls, a) -> "ObservableTriple":
        a = np.asarray(a, dtype=float)
        return cls(float(a[0]), float(a[1]), float(a[2]))


@dataclass(frozen=True)
class SegmentPropagator:
    """Affine map A -> matrix @ A + offset on the (h, l, d) triple."""

    matrix: np.ndarray
    offset: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def apply(self, triple: ObservableTriple) -> ObservableTriple:
        return ObservableTriple.from_array(self.matrix @ triple.as_array() + self.offset)

    def then(self, other: "SegmentPropagator") -> "SegmentPropagator":
        """The map that applies ``self`` first and ``other`` second."""
        return SegmentPropagator(other.matrix @ self.matrix,
                                 other.matrix @ self.offset + other.offset)

    @classmethod
    def identity(cls) -> "SegmentPropagator":
        return cls(np.eye(3))


@dataclass(frozen=True)
class LagrangeMultipliers:
    beta: float  # 1/J
    alpha: complex


@dataclass(frozen=True)
class BathSpec:
    temperature: float
    omega: float
    k_down: float

    def __post_init__(self):
        if not (self.temperature > 0 and self.omega > 0 and self.k_down > 0):
            raise DomainError(
                f"bath needs positive temperature, omega and k_down, got {self}"
            )


@dataclass(frozen=True)
class NoiseSpec:
    """Noise strengths on the adiabats.

    Both are stored in seconds so that ``gamma * omega`` is dimensionless.
    """

    gamma_p: float = 0.0
    gamma_a: float = 0.0

    def __post_init__(self):
        if self.gamma_p < 0 or self.gamma_a < 0:
            raise DomainError("noise strengths must be non-negative")

    @property
    def is_zero(self) -> bool:
        return self.gamma_p == 0 and self.gamma_a == 0


def coth(x: float) -> float:
    if x == 0:
        raise DomainError("coth(0) is infinite")
    if abs(x) < _COTH_SERIES_CUTOFF:
        return 1.0 / x + x / 3.0
    return 1.0 / math.tanh(x)


def arccoth(y: float) -> float:
    if abs(y) <= 1:
        raise DomainError(f"arccoth needs |y| > 1, got {y!r}")
    # atanh(1/y) keeps full precision for large y
    return math.atanh(1.0 / y)


def _check_positive(**kw):
    for name, value in kw.items():
        if not value > 0:
            raise DomainError(f"{name} must be positive, got {value!r}")


def equilibrium_energy(omega: float, temperature: float,
                       constants: PhysicalConstants = CODATA) -> float:
    """Thermal <H> of an oscillator: (hbar w / 2) coth(hbar w / 2 kB T)."""
    _check_positive(omega=omega, temperature=temperature)
    x = constants.hbar * omega / (2.0 * constants.kB * temperature)
    if x > 40.0:
        # coth(x) == 1 to double precision
        return 0.5 * constants.hbar * omega
    return 0.5 * constants.hbar * omega * coth(x)


def thermal_triple(omega: float, temperature: float,
                   constants: PhysicalConstants = CODATA) -> ObservableTriple:
    return ObservableTriple(equilibrium_energy(omega, temperature, constants), 0.0, 0.0)


def lagrange_multipliers(triple: ObservableTriple, omega: float,
                         constants: PhysicalConstants = CODATA) -> LagrangeMultipliers:
    """Recover (beta, alpha) of the generalized Gibbs state from <H>, <L>, <D>."""
    _check_positive(omega=omega)
    hw = constants.hbar * omega
    h, l, d = triple.h, triple.l, triple.d
    # dimensionless units of hbar*omega
    hs, ls, ds = h / hw, l / hw, d / hw
    denom = 4.0 * (ls * ls + ds * ds) - (1.0 - 2.0 * hs) ** 2
    if denom == 0 or not math.isfinite(denom):
        raise SingularStateError("vanishing denominator in Lagrange multipliers")
    # log argument is 1 + (2 - 4 h)/denom; log1p keeps the high-temperature digits
    excess = (2.0 - 4.0 * hs) / denom
    if not excess > -1.0:
        raise SingularStateError(f"log argument {1.0 + excess!r} is not positive")
    alpha = 2.0 * complex(ls, ds) / denom
    beta = math.log1p(excess) / hw
    return LagrangeMultipliers(beta=beta, alpha=alpha)


def casimir_form(triple: ObservableTriple, omega: float,
                 constants: PhysicalConstants = CODATA) -> float:
    """(h^2 - l^2 - d^2) / (hbar omega)^2."""
    _check_positive(omega=omega)
    hw = constants.hbar * omega
    h, l, d = triple.h / hw, triple.l / hw, triple.d / hw
    return h * h - l * l - d * d
