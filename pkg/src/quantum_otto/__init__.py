"""Quantum Otto refrigerator with a harmonic-oscillator working medium.

Propagates the (<H>, <L>, <D>) triple through the four strokes, with phase and
amplitude noise on the adiabats, and evaluates the closed-form noise measures
and refrigeration temperature bounds.
"""
from .core import (
    CODATA,
    HBAR,
    KB,
    BathSpec,
    DomainError,
    LagrangeMultipliers,
    NoiseSpec,
    ObservableTriple,
    PhysicalConstants,
    SegmentPropagator,
    SingularStateError,
    casimir_form,
    equilibrium_energy,
    lagrange_multipliers,
    thermal_triple,
)
from .integrate import IntegratorError

__version__ = "0.1.0"

__all__ = [
    "CODATA", "HBAR", "KB", "BathSpec", "DomainError", "IntegratorError",
    "LagrangeMultipliers", "NoiseSpec", "ObservableTriple", "PhysicalConstants",
    "SegmentPropagator", "SingularStateError", "casimir_form", "equilibrium_energy",
    "lagrange_multipliers", "thermal_triple", "__version__",
]
