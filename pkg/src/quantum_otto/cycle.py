"""The four-stroke refrigeration cycle, its limit cycle and temperature bounds.

Stroke order: hot isochore, expansion adiabat (omega_h -> omega_c), cold
isochore, compression adiabat (omega_c -> omega_h). Heat and work are read off
as changes of <H>; energy flowing into the medium counts as positive.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .adiabat import AdiabatSpec, adiabaticity_delta, propagate_adiabat_numeric
from .core import (
    CODATA,
    BathSpec,
    DomainError,
    NoiseSpec,
    ObservableTriple,
    PhysicalConstants,
    SegmentPropagator,
    arccoth,
    coth,
)
from .isochore import IsochoreSegment, isochore_propagator
from .magnus import delta_at_optimum

SEGMENT_NAMES = ("hot_isochore", "expansion", "cold_isochore", "compression")


class NonContractiveError(ArithmeticError):
    """The one-cycle map has no attracting fixed point."""


@dataclass(frozen=True)
class CycleConfig:
    hot: BathSpec
    cold: BathSpec
    n_expansion: int = 1
    n_compression: int = 1
    noise: NoiseSpec = field(default_factory=NoiseSpec)
    isochore_durations: tuple[float, float] | None = None  # (hot, cold) in s

    def __post_init__(self):
        # equal frequencies are allowed as a degenerate, identity-adiabat cycle
        if self.hot.omega < self.cold.omega:
            raise DomainError("hot-bath frequency must not be below the cold one")
        if not self.hot.temperature > self.cold.temperature:
            raise DomainError("hot bath must be hotter than the cold bath")
        if self.n_expansion < 1 or self.n_compression < 1:
            raise DomainError("cycle indices must be positive integers")

    def isochores(self, constants: PhysicalConstants = CODATA):
        if self.isochore_durations is None:
            return (IsochoreSegment.thermalizing(self.hot, constants=constants),
                    IsochoreSegment.thermalizing(self.cold, constants=constants))
        t_hot, t_cold = self.isochore_durations
        return IsochoreSegment(self.hot, t_hot), IsochoreSegment(self.cold, t_cold)

    def expansion(self) -> AdiabatSpec:
        return AdiabatSpec.frictionless(self.hot.omega, self.cold.omega, self.n_expansion,
                                        self.noise)

    def compression(self) -> AdiabatSpec:
        return AdiabatSpec.frictionless(self.cold.omega, self.hot.omega,
                                        self.n_compression, self.noise)


@dataclass
class CycleReport:
    limit_triple_start_hot: ObservableTriple
    q_cold: float
    q_hot: float
    w_net: float
    cop: float | None
    delta_expansion: float
    converged: bool
    delta_compression: float = 0.0
    w_expansion: float = 0.0
    w_compression: float = 0.0
    states: dict = field(default_factory=dict)
    spectral_radius: float = 0.0
    first_law_residual: float = 0.0

    @property
    def refrigerating(self) -> bool:
        return self.q_cold > 0

    def as_dict(self) -> dict:
        out = {
            "h_start_hot": self.limit_triple_start_hot.h,
            "l_start_hot": self.limit_triple_start_hot.l,
            "d_start_hot": self.limit_triple_start_hot.d,
            "q_cold": self.q_cold,
            "q_hot": self.q_hot,
            "w_expansion": self.w_expansion,
            "w_compression": self.w_compression,
            "w_net": self.w_net,
            "cop": self.cop,
            "refrigerating": bool(self.refrigerating),
            "delta_expansion": self.delta_expansion,
            "delta_compression": self.delta_compression,
            "spectral_radius": self.spectral_radius,
            "first_law_residual": self.first_law_residual,
            "converged": self.converged,
        }
        return out


def cycle_segments(config: CycleConfig, tol: float = 1e-10,
                   constants: PhysicalConstants = CODATA) -> list[SegmentPropagator]:
    hot_iso, cold_iso = config.isochores(constants)
    return [
        isochore_propagator(hot_iso, constants),
        propagate_adiabat_numeric(config.expansion(), tol),
        isochore_propagator(cold_iso, constants),
        propagate_adiabat_numeric(config.compression(), tol),
    ]


def compose_cycle(config: CycleConfig, tol: float = 1e-10,
                  constants: PhysicalConstants = CODATA,
                  segments: list[SegmentPropagator] | None = None) -> SegmentPropagator:
    """One-cycle affine map, starting and ending at the hot-isochore entrance."""
    if segments is None:
        segments = cycle_segments(config, tol, constants)
    total = SegmentPropagator.identity()
    for seg in segments:
        total = total.then(seg)
    return total


def _fixed_point(cyc: SegmentPropagator):
    radius = float(np.max(np.abs(np.linalg.eigvals(cyc.matrix))))
    if not radius < 1:
        raise NonContractiveError(f"cycle map spectral radius {radius:.6g} >= 1")
    a = np.linalg.solve(np.eye(3) - cyc.matrix, cyc.offset)
    return a, radius


def find_limit_cycle(config: CycleConfig, tol: float = 1e-10,
                     constants: PhysicalConstants = CODATA) -> ObservableTriple:
    a, _ = _fixed_point(compose_cycle(config, tol, constants))
    return ObservableTriple.from_array(a)


def iterate_cycle(cyc: SegmentPropagator, start: ObservableTriple,
                  n_cycles: int) -> ObservableTriple:
    a = start.as_array()
    for _ in range(n_cycles):
        a = cyc.matrix @ a + cyc.offset
    return ObservableTriple.from_array(a)


def cycle_energetics(config: CycleConfig, tol: float = 1e-10,
                     constants: PhysicalConstants = CODATA) -> CycleReport:
    segments = cycle_segments(config, tol, constants)
    cyc = compose_cycle(config, segments=segments)
    a0, radius = _fixed_point(cyc)
    states = [a0]
    for seg in segments:
        states.append(seg.matrix @ states[-1] + seg.offset)
    dh = [states[i + 1][0] - states[i][0] for i in range(4)]
    q_hot, w_exp, q_cold, w_comp = (float(v) for v in dh)
    w_net = w_exp + w_comp
    scale = max(abs(q_cold), abs(q_hot), abs(w_net))
    residual = abs(q_cold + q_hot + w_net) / scale if scale > 0 else 0.0
    closure = float(np.max(np.abs(states[4] - a0)) / max(np.max(np.abs(a0)), 1e-300))
    expansion, compression = config.expansion(), config.compression()
    return CycleReport(
        limit_triple_start_hot=ObservableTriple.from_array(a0),
        q_cold=q_cold,
        q_hot=q_hot,
        w_net=w_net,
        cop=q_cold / abs(w_net) if q_cold > 0 and w_net != 0 else None,
        delta_expansion=adiabaticity_delta(segments[1], expansion.omega0, expansion.omegaf),
        delta_compression=adiabaticity_delta(segments[3], compression.omega0,
                                             compression.omegaf),
        converged=bool(closure < 1e-10),
        w_expansion=w_exp,
        w_compression=w_comp,
        states={name: ObservableTriple.from_array(s)
                for name, s in zip(("start",) + SEGMENT_NAMES, states)},
        spectral_radius=radius,
        first_law_residual=residual,
    )


def _x(omega, temperature, constants):
    return constants.hbar * omega / (2.0 * constants.kB * temperature)


def max_heat(config: CycleConfig, delta: float,
             constants: PhysicalConstants = CODATA) -> float:
    """Largest heat the cold bath can give up per cycle, starting from hot equilibrium."""
    if delta < 0:
        raise DomainError("delta must be non-negative")
    wc = config.cold.omega
    half = 0.5 * constants.hbar * wc
    coth_c = coth(_x(wc, config.cold.temperature, constants))
    coth_h = coth(_x(config.hot.omega, config.hot.temperature, constants))
    return half * (coth_c - coth_h) - half * delta * coth_h


def tc_bound(omega_c: float, omega_h: float, t_h: float, delta: float,
             constants: PhysicalConstants = CODATA) -> float:
    """Lowest cold-bath temperature that still allows refrigeration."""
    if delta < 0:
        raise DomainError("delta must be non-negative")
    if not (omega_c > 0 and omega_h > 0 and t_h > 0):
        raise DomainError("frequencies and temperature must be positive")
    arg = (1.0 + delta) * coth(_x(omega_h, t_h, constants))
    if not arg > 1:
        raise DomainError(f"arccoth argument {arg} must exceed 1")
    return constants.hbar * omega_c / (2.0 * constants.kB * arccoth(arg))


def carnot_limit(omega_c: float, omega_h: float, t_h: float) -> float:
    return omega_c / omega_h * t_h


def minimum_temperature(omega_c: float, omega_h: float, t_h: float, noise: NoiseSpec,
                        rule: str = "printed",
                        constants: PhysicalConstants = CODATA) -> float:
    """Temperature bound at the optimal cycle index.

    ``rule="printed"`` uses the single-channel measure at the crossing,
    ``rule="additive"`` uses the sum of both channels there (twice as large).
    """
    if noise.is_zero:
        return tc_bound(omega_c, omega_h, t_h, 0.0, constants)
    opt = delta_at_optimum(omega_h, omega_c, noise)
    if rule == "printed":
        delta = opt.printed
    elif rule == "additive":
        delta = opt.additive
    else:
        raise ValueError(f"unknown rule {rule!r}")
    return tc_bound(omega_c, omega_h, t_h, delta, constants)


def refrigeration_possible(config: CycleConfig, delta: float,
                           constants: PhysicalConstants = CODATA) -> bool:
    return max_heat(config, delta, constants) >= 0


__all__ = [
    "CycleConfig", "CycleReport", "NonContractiveError", "SEGMENT_NAMES", "cycle_segments",
    "compose_cycle", "find_limit_cycle", "iterate_cycle", "cycle_energetics", "max_heat",
    "tc_bound", "carnot_limit", "minimum_temperature", "refrigeration_possible",
]
