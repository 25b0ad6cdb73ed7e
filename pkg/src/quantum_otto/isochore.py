"""Isochores: fixed frequency, contact with a bath obeying detailed balance."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    CODATA,
    BathSpec,
    DomainError,
    ObservableTriple,
    PhysicalConstants,
    SegmentPropagator,
    equilibrium_energy,
)

DEFAULT_THERMALIZATION = 6.0  # durations in units of 1/Gamma


@dataclass(frozen=True)
class IsochoreRates:
    k_down: float
    k_up: float
    gamma_cap: float


@dataclass(frozen=True)
class IsochoreSegment:
    bath: BathSpec
    duration: float

    def __post_init__(self):
        if not self.duration >= 0:
            raise DomainError(f"isochore duration must be >= 0, got {self.duration}")

    @classmethod
    def thermalizing(cls, bath: BathSpec, n_relax: float = DEFAULT_THERMALIZATION,
                     constants: PhysicalConstants = CODATA) -> "IsochoreSegment":
        return cls(bath, n_relax / rates_from_bath(bath, constants).gamma_cap)


def rates_from_bath(bath: BathSpec, constants: PhysicalConstants = CODATA) -> IsochoreRates:
    x = constants.hbar * bath.omega / (constants.kB * bath.temperature)
    k_up = bath.k_down * math.exp(-x)
    # -expm1 avoids cancellation when k_up ~ k_down at high temperature
    return IsochoreRates(bath.k_down, k_up, -bath.k_down * math.expm1(-x))


def isochore_generator(bath: BathSpec, constants: PhysicalConstants = CODATA):
    """(M, c) such that dA/dt = M A + c while coupled to ``bath``."""
    g = rates_from_bath(bath, constants).gamma_cap
    w = bath.omega
    m = np.array([[-g, 0.0, 0.0], [0.0, -g, -2.0 * w], [0.0, 2.0 * w, -g]])
    c = np.array([g * equilibrium_energy(w, bath.temperature, constants), 0.0, 0.0])
    return m, c


def isochore_propagator(seg: IsochoreSegment,
                        constants: PhysicalConstants = CODATA) -> SegmentPropagator:
    g = rates_from_bath(seg.bath, constants).gamma_cap
    h_eq = equilibrium_energy(seg.bath.omega, seg.bath.temperature, constants)
    t = seg.duration
    decay = math.exp(-g * t)
    phase = 2.0 * seg.bath.omega * t
    c, s = math.cos(phase), math.sin(phase)
    m = decay * np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])
    # 1 - exp(-g t) via expm1 for short contacts
    return SegmentPropagator(m, np.array([-math.expm1(-g * t) * h_eq, 0.0, 0.0]))


def propagate_isochore(initial: ObservableTriple, seg: IsochoreSegment,
                       constants: PhysicalConstants = CODATA) -> ObservableTriple:
    g = rates_from_bath(seg.bath, constants).gamma_cap
    h_eq = equilibrium_energy(seg.bath.omega, seg.bath.temperature, constants)
    t = seg.duration
    decay = math.exp(-g * t)
    phase = 2.0 * seg.bath.omega * t
    c, s = math.cos(phase), math.sin(phase)
    # h0 + (1 - e^{-g t})(h_eq - h0): no cancellation when h0 << h_eq, exact at h0 = h_eq
    return ObservableTriple(
        initial.h - math.expm1(-g * t) * (h_eq - initial.h),
        decay * (c * initial.l - s * initial.d),
        decay * (s * initial.l + c * initial.d),
    )
