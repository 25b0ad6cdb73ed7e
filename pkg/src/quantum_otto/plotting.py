"""Figure files for the CLI datasets (matplotlib, non-interactive backend)."""
from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .output import Dataset  # noqa: E402

RC = {
    "font.size": 10,
    "axes.labelsize": 11,
    "legend.fontsize": 8,
    "xtick.direction": "in",
    "ytick.direction": "in",
    "figure.figsize": (4.8, 3.4),
    "savefig.dpi": 150,
}


def _floats(ds: Dataset, name: str):
    out = []
    for v in ds.column(name):
        try:
            out.append(float(v))
        except (TypeError, ValueError):
            out.append(math.nan)
    return out


def _save(fig, path):
    fig.tight_layout()
    # fixed metadata keeps the files byte-stable between runs
    fig.savefig(path, metadata={"Software": None} if str(path).endswith(".png") else None)
    plt.close(fig)


def plot_sweep_n(ds: Dataset, path):
    n = _floats(ds, "n")
    with plt.rc_context(RC):
        fig, ax = plt.subplots()
        ax.plot(n, _floats(ds, "delta_p_magnus1"), "b-", label=r"$\delta_p$ first order")
        ax.plot(n, _floats(ds, "delta_p_exact"), "ks", ms=3, label=r"$\delta_p$ exact")
        ax.plot(n, _floats(ds, "delta_a_magnus1"), "g--", label=r"$\delta_a$ first order")
        ax.plot(n, _floats(ds, "delta_a_exact"), "ro", ms=3, mfc="none",
                label=r"$\delta_a$ exact")
        ax.set_xlabel("$n$")
        ax.set_ylabel(r"$\delta$")
        ax.set_yscale("log")
        ax.legend()
        _save(fig, path)


def plot_sweep_ratio(ds: Dataset, path):
    with plt.rc_context(RC):
        fig, ax = plt.subplots()
        ax.plot(_floats(ds, "ratio"), _floats(ds, "n_continuous"), "k-")
        ax.plot(_floats(ds, "ratio"), _floats(ds, "n_integer"), "r.", ms=4)
        ax.set_xlabel(r"$\omega_h/\omega_c$")
        ax.set_ylabel(r"$n_{op}$")
        _save(fig, path)


def plot_tmin(ds: Dataset, path):
    with plt.rc_context(RC):
        fig, ax = plt.subplots()
        w = _floats(ds, "omega_c")
        ax.loglog(w, _floats(ds, "tc_carnot"), "k-", label="noiseless")
        ax.loglog(w, _floats(ds, "tc_noisy_printed"), "b--", label="noisy")
        ax.loglog(w, _floats(ds, "tc_noisy_additive"), "g:", label="noisy, summed channels")
        ax.set_xlabel(r"$\omega_c$ (rad/s)")
        ax.set_ylabel(r"$T_c^{min}$ (K)")
        ax.legend()
        _save(fig, path)


def plot_trace(ds: Dataset, path):
    with plt.rc_context(RC):
        fig, ax = plt.subplots()
        theta = _floats(ds, "theta")
        for name, style in (("h", "k-"), ("l", "b--"), ("d", "r:")):
            ax.plot(theta, _floats(ds, name), style, label=f"<{name.upper()}>")
        ax.set_xlabel(r"$\theta$")
        ax.set_ylabel("energy (J)")
        ax.legend()
        _save(fig, path)


PLOTTERS = {
    "sweep-n": plot_sweep_n,
    "sweep-ratio": plot_sweep_ratio,
    "tmin": plot_tmin,
    "adiabat-trace": plot_trace,
}
