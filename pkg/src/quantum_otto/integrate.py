"""Adaptive Runge-Kutta integration of small linear systems dY/dx = A(x) Y.

The state is a dense array (a 3-vector or a 3x3 propagator) and the generator
is a callable returning the matrix A(x). Two embedded pairs are available:

``"dop853"``
    scipy's Dormand-Prince 8(5,3). Default; roughly five times fewer steps
    than the 5(4) pair at the tolerances the adiabat checks need.
``"dopri5"``
    Dormand-Prince 5(4) with a PI step controller, implemented here.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import solve_ivp

__all__ = ["IntegratorError", "IntegrationResult", "integrate_linear", "TOL_MIN", "TOL_MAX", "METHODS"]

TOL_MIN = 1e-14
TOL_MAX = 1e-4

_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
# b5 - b4
_E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)

METHODS = ("dop853", "dopri5")

_SAFETY = 0.9
_ALPHA = 0.7 / 5
_BETA = 0.4 / 5
_FAC_MIN = 0.2
_FAC_MAX = 5.0


class IntegratorError(RuntimeError):
    """The step size collapsed or the solution became non-finite."""


@dataclass
class IntegrationResult:
    y: np.ndarray
    checkpoints: list = field(default_factory=list)  # [(x, y), ...]
    n_steps: int = 0
    n_rejected: int = 0


_A_ROWS = [np.array(row) for row in _A]
_E_ARR = np.array(_E)


def _step(gen, x, y, h, k1):
    shape = y.shape
    k = np.empty((7, y.size))
    k[0] = k1.ravel()
    for i in range(1, 7):
        yi = y + (h * (_A_ROWS[i] @ k[:i])).reshape(shape)
        k[i] = (gen(x + _C[i] * h) @ yi).ravel()
    # the last stage sits at the new point on the 5th-order solution (FSAL)
    return yi, (h * (_E_ARR @ k)).reshape(shape), k[6].reshape(shape)


def integrate_linear(
    generator: Callable[[float], np.ndarray],
    x0: float,
    x1: float,
    y0,
    tol: float = 1e-10,
    checkpoints: Sequence[float] = (),
    method: str = "dop853",
) -> IntegrationResult:
    """Integrate dY/dx = generator(x) @ Y from x0 to x1.

    ``tol`` is used as both absolute and relative tolerance on every
    component; ``checkpoints`` are hit exactly and their states returned in
    order of traversal.
    """
    if not (TOL_MIN <= tol <= TOL_MAX):
        raise ValueError(f"tol must lie in [{TOL_MIN}, {TOL_MAX}], got {tol}")
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; choose from {METHODS}")
    y = np.array(y0, dtype=float)
    span = x1 - x0
    if span == 0:
        return IntegrationResult(y=y, checkpoints=[(x0, y.copy()) for _ in checkpoints])
    direction = 1.0 if span > 0 else -1.0
    stops = sorted(checkpoints, key=lambda c: direction * c)
    for c in stops:
        if direction * (c - x0) < 0 or direction * (c - x1) > 0:
            raise ValueError(f"checkpoint {c} outside [{x0}, {x1}]")
    stops.append(x1)
    if method == "dop853":
        return _run_scipy(generator, x0, stops, y, tol)
    return _run_dopri5(generator, x0, stops, y, tol, direction, span)


def _run_scipy(generator, x0, stops, y, tol):
    shape = y.shape
    result = IntegrationResult(y=y)

    def rhs(x, v):
        return (generator(x) @ v.reshape(shape)).ravel()

    x = x0
    last = len(stops) - 1
    for i, stop in enumerate(stops):
        if stop != x:
            sol = solve_ivp(rhs, (x, stop), y.ravel(), method="DOP853", rtol=tol, atol=tol)
            if sol.status != 0:
                raise IntegratorError(f"integration failed near x={sol.t[-1]}: {sol.message}")
            y = sol.y[:, -1].reshape(shape)
            if not np.all(np.isfinite(y)):
                raise IntegratorError(f"non-finite state at x={stop}")
            result.n_steps += sol.t.size - 1
            x = stop
        if i < last:
            result.checkpoints.append((stop, y.copy()))
    result.y = y
    return result


def _run_dopri5(generator, x0, stops, y, tol, direction, span):
    result = IntegrationResult(y=y)

    x = float(x0)
    f = generator(x) @ y
    scale = tol + tol * np.abs(y)
    d0 = np.max(np.abs(y) / scale)
    d1 = np.max(np.abs(f) / scale)
    h = 0.01 * d0 / d1 if d1 > 1e-5 and d0 > 1e-5 else 1e-6
    h = min(h, abs(span))
    err_old = 1e-4
    rejected_last = False

    last = len(stops) - 1
    for i, stop in enumerate(stops):
        while direction * (stop - x) > 0:
            remaining = abs(stop - x)
            hit = h >= remaining
            step = remaining if hit else h
            if step <= 16 * np.spacing(abs(x) + abs(span)):
                if hit:
                    # stop is within round-off of x
                    x = stop
                    break
                raise IntegratorError(f"step size underflow at x={x}")
            with np.errstate(over="ignore", invalid="ignore"):
                # overflow surfaces as a non-finite error norm below
                y_new, err, f_new = _step(generator, x, y, direction * step, f)
            scale = tol + tol * np.maximum(np.abs(y), np.abs(y_new))
            err_norm = float(np.sqrt(np.mean((err / scale) ** 2)))
            if not np.isfinite(err_norm):
                raise IntegratorError(f"non-finite solution at x={x}")
            if err_norm <= 1.0:
                x = stop if hit else x + direction * step
                y, f = y_new, f_new
                result.n_steps += 1
                fac = _SAFETY * max(err_norm, 1e-10) ** -_ALPHA * err_old ** _BETA
                fac = min(_FAC_MAX, max(_FAC_MIN, fac))
                if rejected_last:
                    fac = min(fac, 1.0)
                # keep the controller step when a stop truncated it
                h = max(h, step) * fac if hit else step * fac
                err_old = max(err_norm, 1e-4)
                rejected_last = False
            else:
                result.n_rejected += 1
                fac = max(_FAC_MIN, _SAFETY * err_norm ** -_ALPHA)
                h = step * fac
                rejected_last = True
        if i < last:
            result.checkpoints.append((stop, y.copy()))
    result.y = y
    return result
