"""Noise on the adiabats in the interaction picture of the noiseless motion.

With U_hc = U1 U2 U3, the noise propagator obeys dU3/dX = W(X) U3 / Omega,
X = Omega * theta, W = U2^-1 N U2. For a frictionless adiabat X runs over
[0, 2 n pi]. This module holds the exact generators, their numeric
propagation, the first-order Magnus terms and the adiabatic-limit closed
forms for the adiabaticity measure.

Closed forms take an ``n`` argument. When it is None the adiabat is assumed
frictionless, so exp(2 n pi mu / Omega) = omegaf / omega0 and the ramp factor
omega0 * (exp(2 n pi mu / Omega) - 1) collapses to omegaf - omega0 without
cancellation. Passing ``n`` evaluates the raw expressions instead.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np
import warnings

from scipy.integrate import IntegrationWarning, quad

from .adiabat import AdiabatSpec
from .core import DomainError, NoiseSpec
from .integrate import integrate_linear


class NoiseChannel(str, enum.Enum):
    PHASE = "phase"
    AMPLITUDE = "amplitude"
    BOTH = "both"


class MagnusOrder(str, enum.Enum):
    FIRST = "first"
    SECOND = "second"
    EXACT = "exact-numeric"


@dataclass(frozen=True)
class MagnusResult:
    u3: np.ndarray
    delta: float
    order: MagnusOrder


class CombinedDelta(NamedTuple):
    additive: float
    product: float
    delta_p: float
    delta_a: float


class OptimalIndex(NamedTuple):
    n_continuous: float
    n_integer: int
    mu_crossing: float


class OptimumDelta(NamedTuple):
    printed: float
    additive: float


def _trig(spec: AdiabatSpec, x: float):
    big = spec.big_omega
    omega = spec.omega0 * math.exp(spec.mu * x / big)
    return big, math.cos(x), math.sin(x), omega


def w_phase(spec: AdiabatSpec, x: float) -> np.ndarray:
    mu = spec.mu
    big, c, s, omega = _trig(spec, x)
    mu2 = mu * mu
    m = np.array([
        [(c - 1) * mu2 * (mu2 * (1 + c) - 8), mu * s * (mu2 * c - 4) * big,
         2 * mu * (c - 1) * (mu2 * c - 4)],
        [-mu * s * (mu2 * c - 4) * big, -(mu2 * (s * s - 1) + 4) * big ** 2,
         -2 * mu2 * s * (c - 1) * big],
        [-2 * mu * (c - 1) * (mu2 * c - 4), -2 * mu2 * s * (c - 1) * big,
         -(mu2 * (mu2 - 4 * s * s - 8 * c) + 16)],
    ])
    return (4.0 * spec.noise.gamma_p * omega / big ** 4) * m


def w_amplitude(spec: AdiabatSpec, x: float) -> np.ndarray:
    mu = spec.mu
    big, c, s, omega = _trig(spec, x)
    p = 4 - mu * mu * c + mu * s * big
    q = mu * s + big * c
    r = mu - mu * c + big * s
    m = np.array([
        [p * p, -q * p * big, 2 * r * p],
        [q * p * big, -q * q * big ** 2, 2 * q * r * big],
        [-2 * r * p, 2 * q * r * big, -4 * r * r],
    ])
    return (spec.noise.gamma_a * omega / big ** 4) * m


def _channel_spec(spec: AdiabatSpec, channel: NoiseChannel) -> AdiabatSpec:
    channel = NoiseChannel(channel)
    if channel is NoiseChannel.PHASE:
        return replace(spec, noise=NoiseSpec(gamma_p=spec.noise.gamma_p))
    if channel is NoiseChannel.AMPLITUDE:
        return replace(spec, noise=NoiseSpec(gamma_a=spec.noise.gamma_a))
    return spec


def interaction_generator(spec: AdiabatSpec, channel: NoiseChannel = NoiseChannel.BOTH):
    """X -> W(X) / Omega for the selected channel."""
    spec = _channel_spec(spec, channel)
    big = spec.big_omega
    use_p = spec.noise.gamma_p > 0
    use_a = spec.noise.gamma_a > 0

    def gen(x):
        w = np.zeros((3, 3))
        if use_p:
            w += w_phase(spec, x)
        if use_a:
            w += w_amplitude(spec, x)
        return w / big

    return gen


def propagate_U3_numeric(spec: AdiabatSpec, channel: NoiseChannel = NoiseChannel.BOTH,
                         tol: float = 1e-10, method: str = "dop853") -> MagnusResult:
    """Integrate the interaction-picture equation over the whole adiabat."""
    x_final = spec.big_omega * spec.theta_final
    sub = _channel_spec(spec, channel)
    if sub.noise.is_zero or x_final == 0:
        return MagnusResult(np.eye(3), 0.0, MagnusOrder.EXACT)
    res = integrate_linear(interaction_generator(sub), 0.0, x_final, np.eye(3),
                           tol=tol, method=method)
    return MagnusResult(res.y, float(res.y[0, 0]) - 1.0, MagnusOrder.EXACT)


def b1_quadrature(spec: AdiabatSpec, channel: NoiseChannel, tol: float = 1e-10) -> np.ndarray:
    """First Magnus term by adaptive quadrature of W / Omega over the adiabat."""
    gen = interaction_generator(spec, channel)
    x_final = spec.big_omega * spec.theta_final
    lo, hi = sorted((0.0, x_final))
    sign = 1.0 if x_final >= 0 else -1.0
    out = np.empty((3, 3))
    with warnings.catch_warnings():
        # roundoff warnings near machine precision are expected for long ramps
        warnings.simplefilter("ignore", IntegrationWarning)
        for i, j in np.ndindex(3, 3):
            out[i, j] = sign * quad(lambda x: gen(x)[i, j], lo, hi, epsabs=0.0, epsrel=tol,
                                    limit=2000)[0]
    return out


def _require_mu(spec: AdiabatSpec):
    if spec.mu == 0:
        raise DomainError("closed forms divide by mu; mu = 0 is excluded")


def ramp_factor(spec: AdiabatSpec, n: int | None = None) -> float:
    """omega0 * (exp(2 n pi mu / Omega) - 1)."""
    if n is None:
        return spec.omegaf - spec.omega0
    return spec.omega0 * math.expm1(2 * n * math.pi * spec.mu / spec.big_omega)


def noise_factor(spec: AdiabatSpec, n: int | None = None) -> float:
    """The common factor F = -16 omega0 (exp(2 n pi mu/Omega) - 1) / (3 mu^2 - 16)."""
    return -16.0 * ramp_factor(spec, n) / (3.0 * spec.mu ** 2 - 16.0)


def b1_phase(spec: AdiabatSpec, n: int | None = None) -> np.ndarray:
    _require_mu(spec)
    mu = spec.mu
    pref = spec.noise.gamma_p * mu * ramp_factor(spec, n) / (3 * mu * mu - 16)
    m = np.array([
        [-32.0, -16.0, -32 / mu - 6 * mu],
        [16.0, -4 + 64 / mu ** 2, 6 * mu],
        [32 / mu + 6 * mu, 6 * mu, 12 + 64 / mu ** 2],
    ])
    return pref * m


def b1_amplitude(spec: AdiabatSpec, n: int | None = None) -> np.ndarray:
    _require_mu(spec)
    mu = spec.mu
    pref = spec.noise.gamma_a * ramp_factor(spec, n) / (3 * mu * mu - 16)
    # (1,3) is -4: the quadrature of W_a fixes the sign
    m = np.array([
        [-16 / mu + mu, -mu, -4.0],
        [mu, 8 / mu - mu, 2.0],
        [4.0, 2.0, 8 / mu],
    ])
    return pref * m


def delta_p_first(spec: AdiabatSpec, n: int | None = None) -> float:
    _require_mu(spec)
    return math.expm1(spec.noise.gamma_p * noise_factor(spec, n) * spec.mu)


def u3_phase_first(spec: AdiabatSpec, n: int | None = None) -> MagnusResult:
    """Diagonal adiabatic-limit U3 for phase noise, first Magnus order."""
    _require_mu(spec)
    g, mu, f = spec.noise.gamma_p, spec.mu, noise_factor(spec, n)
    u3 = np.diag([
        math.exp(g * f * mu),
        4 / (4 + mu * mu) * math.exp(-4 * g * f / mu),
        math.exp(-g * f * spec.big_omega ** 2 / mu),
    ])
    return MagnusResult(u3, delta_p_first(spec, n), MagnusOrder.FIRST)


def _second_order_beta(spec: AdiabatSpec, n: int | None) -> float:
    mu, g = spec.mu, spec.noise.gamma_p
    if n is None:
        ramp2 = spec.omegaf ** 2 - spec.omega0 ** 2
    else:
        ramp2 = spec.omega0 ** 2 * math.expm1(4 * n * math.pi * mu / spec.big_omega)
    return 16.0 * g * g * ramp2 / (4.0 + 3.0 * mu * mu)


def _cosh_minus_one(b: float) -> float:
    return 2.0 * math.sinh(0.5 * b) ** 2


def delta_p_second(spec: AdiabatSpec, n: int | None = None) -> float:
    return _cosh_minus_one(_second_order_beta(spec, n))


def u3_phase_second(spec: AdiabatSpec, n: int | None = None) -> MagnusResult:
    b = _second_order_beta(spec, n)
    ch, sh = math.cosh(b), math.sinh(b)
    u3 = np.array([[ch, -sh, 0.0], [-sh, ch, 0.0], [0.0, 0.0, 1.0]])
    return MagnusResult(u3, _cosh_minus_one(b), MagnusOrder.SECOND)


def delta_p_second_limit(omega0: float, omegaf: float, gamma_p: float) -> float:
    """Large-n plateau of the second-order phase-noise measure."""
    return _cosh_minus_one(4.0 * gamma_p ** 2 * (omega0 ** 2 - omegaf ** 2))


def delta_a(spec: AdiabatSpec, n: int | None = None) -> float:
    _require_mu(spec)
    return math.expm1(spec.noise.gamma_a * noise_factor(spec, n) / spec.mu)


def u3_amplitude_first(spec: AdiabatSpec, n: int | None = None) -> MagnusResult:
    _require_mu(spec)
    e = spec.noise.gamma_a * noise_factor(spec, n) / spec.mu
    u3 = np.diag([math.exp(e), math.exp(-e / 2), math.exp(-e / 2)])
    return MagnusResult(u3, math.expm1(e), MagnusOrder.FIRST)


def delta_combined(spec: AdiabatSpec, n: int | None = None) -> CombinedDelta:
    """Both noise channels; ``additive`` is what the temperature bound consumes."""
    dp = delta_p_first(spec, n)
    da = delta_a(spec, n)
    return CombinedDelta(additive=dp + da, product=(1 + dp) * (1 + da) - 1, delta_p=dp,
                         delta_a=da)


def _mu_continuous(ln_ratio: float, n: float) -> float:
    return -2.0 * ln_ratio / math.sqrt(4 * n * n * math.pi ** 2 + ln_ratio ** 2)


def _check_optimum_domain(noise: NoiseSpec):
    if not (noise.gamma_p > 0 and noise.gamma_a > 0):
        raise DomainError("the optimum needs both noise channels")
    if not 4 * noise.gamma_p > noise.gamma_a:
        raise DomainError("no optimum: requires 4 gamma_p > gamma_a")


def n_optimal(omega0: float, omegaf: float, noise: NoiseSpec) -> OptimalIndex:
    """Cycle index where the phase and amplitude measures cross."""
    _check_optimum_domain(noise)
    ln_r = abs(math.log(omega0 / omegaf))
    n_cont = math.sqrt(4 * noise.gamma_p / noise.gamma_a - 1) * ln_r / (2 * math.pi)
    mu_cross = math.copysign(math.sqrt(noise.gamma_a / noise.gamma_p), omegaf - omega0)
    mu_check = _mu_continuous(math.log(omega0 / omegaf), n_cont)
    if abs(abs(mu_check) - abs(mu_cross)) > 1e-9 * abs(mu_cross):
        raise ArithmeticError(f"crossing check failed: {mu_check} vs {mu_cross}")

    lo = max(1, math.floor(n_cont))
    best, best_val = lo, None
    for n in (lo, max(lo, math.ceil(n_cont))):
        val = delta_combined(AdiabatSpec.frictionless(omega0, omegaf, n, noise)).additive
        if best_val is None or val < best_val - 1e-12:
            best, best_val = n, val
    return OptimalIndex(n_cont, best, mu_cross)


def delta_at_optimum(omega0: float, omegaf: float, noise: NoiseSpec) -> OptimumDelta:
    _check_optimum_domain(noise)
    gp, ga = noise.gamma_p, noise.gamma_a
    exponent = -16 * math.sqrt(ga) * gp ** 1.5 * abs(omega0 - omegaf) / (3 * ga - 16 * gp)
    single = math.expm1(exponent)
    return OptimumDelta(printed=single, additive=2.0 * single)


def delta_table(omega0: float, omegaf: float, noise: NoiseSpec, n: int):
    """All closed-form measures for the frictionless adiabat with index n."""
    spec = AdiabatSpec.frictionless(omega0, omegaf, n, noise)
    return {
        "mu": spec.mu,
        "delta_p_magnus1": delta_p_first(spec),
        "delta_p_magnus2": delta_p_second(spec),
        "delta_a_magnus1": delta_a(spec),
        "delta_pa": delta_combined(spec).additive,
    }


__all__ = [
    "NoiseChannel", "MagnusOrder", "MagnusResult", "CombinedDelta", "OptimalIndex",
    "OptimumDelta", "w_phase", "w_amplitude", "interaction_generator",
    "propagate_U3_numeric", "b1_quadrature", "ramp_factor", "noise_factor", "b1_phase", "b1_amplitude",
    "delta_p_first", "u3_phase_first", "delta_p_second", "u3_phase_second",
    "delta_p_second_limit", "delta_a", "u3_amplitude_first", "delta_combined",
    "n_optimal", "delta_at_optimum", "delta_table",
]
