"""Dataset builders behind the CLI subcommands."""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__
from .adiabat import AdiabatSpec, adiabat_trace, frictionless_tau
from .config import TWO_PI, RunConfig
from .core import casimir_form, thermal_triple
from .cycle import carnot_limit, cycle_energetics, max_heat, minimum_temperature, tc_bound
from .integrate import IntegratorError
from .magnus import (
    NoiseChannel,
    b1_amplitude,
    b1_phase,
    b1_quadrature,
    delta_at_optimum,
    delta_table,
    n_optimal,
    propagate_U3_numeric,
)
from .output import Dataset

SWEEP_N_COLUMNS = [
    "n", "mu", "tau_expansion", "delta_p_exact", "delta_p_magnus1", "delta_p_magnus2",
    "delta_a_exact", "delta_a_magnus1", "delta_pa", "b1_rel_dev", "valid", "error",
]
SWEEP_RATIO_COLUMNS = [
    "ratio", "n_continuous", "n_integer", "delta_at_optimum", "t_min",
    "delta_additive", "t_min_additive",
]
TMIN_COLUMNS = ["omega_c", "tc_carnot", "tc_noisy_printed", "tc_noisy_additive"]
TRACE_COLUMNS = ["theta", "omega", "h", "l", "d", "casimir_form"]

SWEEP_DEFAULTS = {
    "sweep-ratio": (2.0, 100.0, 50),
    "tmin": (TWO_PI * 1e-3, TWO_PI * 1e3, 61),
}


def metadata(command: str, cfg: RunConfig) -> dict:
    return {
        "tool": "quantum-otto",
        "version": __version__,
        "command": command,
        "tolerances": {"ode_tol": cfg.ode_tol, "quad_tol": cfg.quad_tol},
        "config": cfg.echo(),
    }


def sweep_grid(cfg: RunConfig, command: str) -> np.ndarray:
    lo, hi, steps = SWEEP_DEFAULTS[command]
    lo = cfg.sweep_min if cfg.sweep_min is not None else lo
    hi = cfg.sweep_max if cfg.sweep_max is not None else hi
    steps = cfg.sweep_steps if cfg.sweep_steps is not None else steps
    if cfg.sweep_scale == "log":
        if not (lo > 0 and hi > 0):
            raise ValueError("log sweeps need positive bounds")
        return np.geomspace(lo, hi, steps)
    return np.linspace(lo, hi, steps)


def _b1_deviation(spec: AdiabatSpec, tol: float) -> float:
    worst = 0.0
    for closed, channel, gamma in ((b1_phase, NoiseChannel.PHASE, spec.noise.gamma_p),
                                   (b1_amplitude, NoiseChannel.AMPLITUDE, spec.noise.gamma_a)):
        if gamma == 0:
            continue
        ref = b1_quadrature(spec, channel, tol)
        diff = np.abs(closed(spec) - ref)
        worst = max(worst, float(np.max(diff / np.maximum(np.abs(ref), 1e-300))))
    return worst


def sweep_n_row(cfg: RunConfig, n: int) -> dict:
    wh, wc = cfg.omega_h_rad_s, cfg.omega_c_rad_s
    row = {"n": n, "valid": True, "error": ""}
    try:
        spec = AdiabatSpec.frictionless(wh, wc, n, cfg.noise)
        row["tau_expansion"] = frictionless_tau(wh, wc, n)
        row.update(delta_table(wh, wc, cfg.noise, n))
        row["delta_p_exact"] = propagate_U3_numeric(spec, NoiseChannel.PHASE, cfg.ode_tol).delta
        row["delta_a_exact"] = propagate_U3_numeric(spec, NoiseChannel.AMPLITUDE,
                                                    cfg.ode_tol).delta
        row["b1_rel_dev"] = _b1_deviation(spec, cfg.quad_tol)
    except (IntegratorError, ArithmeticError, ValueError) as exc:
        row["valid"] = False
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def build_sweep_n(cfg: RunConfig, jobs: int = 1) -> Dataset:
    ns = list(range(1, cfg.n_max + 1))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(sweep_n_row, [cfg] * len(ns), ns))
    else:
        rows = [sweep_n_row(cfg, n) for n in ns]
    return Dataset(SWEEP_N_COLUMNS, rows, metadata("sweep-n", cfg))


def build_sweep_ratio(cfg: RunConfig) -> Dataset:
    rows = []
    wc, noise = cfg.omega_c_rad_s, cfg.noise
    for ratio in sweep_grid(cfg, "sweep-ratio"):
        ratio = float(ratio)
        row = {"ratio": ratio, "error": ""}
        try:
            wh = ratio * wc
            opt = n_optimal(wh, wc, noise)
            delta = delta_at_optimum(wh, wc, noise)
            row.update(
                n_continuous=opt.n_continuous,
                n_integer=opt.n_integer,
                delta_at_optimum=delta.printed,
                t_min=tc_bound(wc, wh, cfg.T_h_K, delta.printed),
                delta_additive=delta.additive,
                t_min_additive=tc_bound(wc, wh, cfg.T_h_K, delta.additive),
            )
        except (ArithmeticError, ValueError) as exc:
            row["error"] = f"{type(exc).__name__}: {exc}"
        rows.append(row)
    return Dataset(SWEEP_RATIO_COLUMNS + ["error"], rows, metadata("sweep-ratio", cfg))


def build_tmin(cfg: RunConfig) -> Dataset:
    wh, th, noise = cfg.omega_h_rad_s, cfg.T_h_K, cfg.noise
    rows = []
    for wc in sweep_grid(cfg, "tmin"):
        wc = float(wc)
        row = {"omega_c": wc, "error": ""}
        try:
            if not wc < wh:
                raise ValueError("omega_c must stay below omega_h")
            row.update(
                tc_carnot=carnot_limit(wc, wh, th),
                tc_noisy_printed=minimum_temperature(wc, wh, th, noise, "printed"),
                tc_noisy_additive=minimum_temperature(wc, wh, th, noise, "additive"),
            )
        except (ArithmeticError, ValueError) as exc:
            row["error"] = f"{type(exc).__name__}: {exc}"
        rows.append(row)
    return Dataset(TMIN_COLUMNS + ["error"], rows, metadata("tmin", cfg))


def build_run_cycle(cfg: RunConfig) -> Dataset:
    """Limit-cycle energetics; NonContractiveError propagates to the caller."""
    cycle = cfg.cycle_config()
    report = cycle_energetics(cycle, cfg.ode_tol)
    row = report.as_dict()
    measured = max(report.delta_expansion, 0.0)
    row["max_heat_bound"] = max_heat(cycle, measured)
    row["tc_bound_measured"] = tc_bound(cfg.omega_c_rad_s, cfg.omega_h_rad_s, cfg.T_h_K,
                                        measured)
    row["tc_carnot"] = carnot_limit(cfg.omega_c_rad_s, cfg.omega_h_rad_s, cfg.T_h_K)
    return Dataset(list(row), [row], metadata("run-cycle", cfg))


def build_adiabat_trace(cfg: RunConfig) -> Dataset:
    wh, wc = cfg.omega_h_rad_s, cfg.omega_c_rad_s
    spec = AdiabatSpec.frictionless(wh, wc, cfg.n_expansion, cfg.noise)
    start = thermal_triple(wh, cfg.T_h_K)
    theta, omega, states = adiabat_trace(spec, start, cfg.trace_points, cfg.ode_tol)
    rows = []
    for th, w, (h, l, d) in zip(theta, omega, states):
        trip = type(start)(float(h), float(l), float(d))
        rows.append({
            "theta": float(th), "omega": float(w), "h": trip.h, "l": trip.l, "d": trip.d,
            "casimir_form": casimir_form(trip, float(w)),
        })
    return Dataset(TRACE_COLUMNS, rows, metadata("adiabat-trace", cfg))


BUILDERS = {
    "sweep-n": build_sweep_n,
    "sweep-ratio": build_sweep_ratio,
    "tmin": build_tmin,
    "run-cycle": build_run_cycle,
    "adiabat-trace": build_adiabat_trace,
}

__all__ = [
    "BUILDERS", "metadata", "sweep_grid", "sweep_n_row", "build_sweep_n", "build_sweep_ratio",
    "build_tmin", "build_run_cycle", "build_adiabat_trace",
]
