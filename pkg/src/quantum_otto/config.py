"""Run configuration: a flat ``key = value`` text file plus command-line overrides.

Lines starting with ``#`` and blank lines are ignored. Unknown keys are an
error so typos do not silently fall back to defaults.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

from .core import BathSpec, DomainError, NoiseSpec
from .cycle import CycleConfig
from .integrate import TOL_MAX, TOL_MIN

TWO_PI = 2.0 * math.pi


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    # defaults are the reference scenario: omega_c = 2 pi 1 kHz, ratio 25
    omega_c_rad_s: float = TWO_PI * 1000.0
    ratio: float = 25.0
    T_h_K: float = 300.0
    T_c_K: float = 50.0
    gamma_p_s: float = 1e-6
    gamma_a_s: float = 5e-9
    k_down_hot: float = 1e9
    k_down_cold: float = 1e9
    n_expansion: int = 1
    n_compression: int = 1
    t_hot_s: float | None = None
    t_cold_s: float | None = None
    n_max: int = 30
    ode_tol: float = 1e-10
    quad_tol: float = 1e-10
    sweep_min: float | None = None
    sweep_max: float | None = None
    sweep_steps: int | None = None
    sweep_scale: str = "log"
    trace_points: int = 101

    def __post_init__(self):
        checks = [
            (self.omega_c_rad_s > 0, "omega_c_rad_s must be positive"),
            (self.ratio >= 1, "ratio must be >= 1"),
            (self.T_h_K > 0 and self.T_c_K > 0, "temperatures must be positive"),
            (self.T_h_K > self.T_c_K, "T_h_K must exceed T_c_K"),
            (self.gamma_p_s >= 0 and self.gamma_a_s >= 0, "noise strengths must be >= 0"),
            (self.k_down_hot > 0 and self.k_down_cold > 0, "k_down values must be positive"),
            (self.n_expansion >= 1 and self.n_compression >= 1, "cycle indices must be >= 1"),
            (self.n_max >= 1, "n_max must be >= 1"),
            (TOL_MIN <= self.ode_tol <= TOL_MAX, f"ode_tol must lie in [{TOL_MIN}, {TOL_MAX}]"),
            (TOL_MIN <= self.quad_tol <= TOL_MAX, f"quad_tol must lie in [{TOL_MIN}, {TOL_MAX}]"),
            (self.sweep_steps is None or self.sweep_steps >= 2, "sweep_steps must be >= 2"),
            (self.sweep_scale in ("log", "linear"), "sweep_scale must be log or linear"),
            (self.trace_points >= 2, "trace_points must be >= 2"),
            ((self.t_hot_s is None) == (self.t_cold_s is None),
             "set both t_hot_s and t_cold_s or neither"),
        ]
        for ok, message in checks:
            if not ok:
                raise ConfigError(message)

    @property
    def omega_h_rad_s(self) -> float:
        return self.ratio * self.omega_c_rad_s

    @property
    def noise(self) -> NoiseSpec:
        return NoiseSpec(self.gamma_p_s, self.gamma_a_s)

    def cycle_config(self) -> CycleConfig:
        durations = None if self.t_hot_s is None else (self.t_hot_s, self.t_cold_s)
        try:
            return CycleConfig(
                hot=BathSpec(self.T_h_K, self.omega_h_rad_s, self.k_down_hot),
                cold=BathSpec(self.T_c_K, self.omega_c_rad_s, self.k_down_cold),
                n_expansion=self.n_expansion,
                n_compression=self.n_compression,
                noise=self.noise,
                isochore_durations=durations,
            )
        except DomainError as exc:
            raise ConfigError(str(exc)) from exc

    def echo(self) -> dict:
        return asdict(self)

    def updated(self, values: dict) -> "RunConfig":
        return replace(self, **coerce(values))


_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _convert(key: str, raw):
    kind = _TYPES[key]
    if raw is None:
        return None
    if isinstance(raw, str):
        text = raw.strip()
        if "None" in kind and text.lower() in ("", "none"):
            return None
    else:
        text = raw
    try:
        if kind.startswith("int"):
            value = float(text)
            if value != int(value):
                raise ValueError
            return int(value)
        if kind.startswith("float"):
            return float(text)
        return str(text)
    except ValueError:
        raise ConfigError(f"bad value for {key}: {raw!r}") from None


def coerce(values: dict) -> dict:
    out = {}
    for key, raw in values.items():
        if key not in _TYPES:
            raise ConfigError(f"unknown config key {key!r}")
        out[key] = _convert(key, raw)
    return out


def parse_config_text(text: str) -> dict:
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" in line:
            key, _, value = line.partition("=")
        elif ":" in line:
            key, _, value = line.partition(":")
        else:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        values[key.strip()] = value.strip()
    return values


def load_config(path: str | Path | None = None, overrides: dict | None = None) -> RunConfig:
    values = {}
    if path is not None:
        try:
            values.update(parse_config_text(Path(path).read_text()))
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
    values.update(overrides or {})
    try:
        return RunConfig(**coerce(values))
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def default_config_text() -> str:
    lines = ["# quantum-otto run configuration"]
    for key, value in RunConfig().echo().items():
        lines.append(f"{key} = {'' if value is None else value}")
    return "\n".join(lines) + "\n"
