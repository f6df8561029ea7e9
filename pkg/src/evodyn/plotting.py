"""Matplotlib figures written as SVG next to the CSV outputs.

Files are made reproducible by fixing the SVG id salt and dropping the date
metadata.
"""
from __future__ import annotations

import numpy as np

_COLORS = {"re": "tab:green", "im": "darkviolet", "abs2": "tab:red", "ratio": "black"}


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams["svg.hashsalt"] = "evodyn"
    return plt


def _save(fig, path):
    fig.savefig(path, format="svg", metadata={"Date": None})
    fig.clf()


def plot_trajectory(traj, scenario, path):
    """g(t) with the two equilibrium asymptotes."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(traj.t, traj.g, color="black", lw=1.5, label="g(t)")
    t = traj.t
    ax.plot(t, scenario.g0 + scenario.gdot0 * t, ls=":", color="gray", label="initial slope")
    offset = 2 * np.log((scenario.gdot_e + scenario.gdot0) / (2 * scenario.gdot_e))
    ax.plot(t, scenario.g0 + scenario.gdot_e * t + offset, ls="--", color="gray", label="final slope")
    ax.set_ylim(min(traj.g) - 0.5, max(traj.g) + 0.5)
    ax.set_xlabel("t")
    ax.set_ylabel("g")
    ax.set_title(f"ev-trajectory, T0 = {scenario.t0_temp:g} to Te = {scenario.te_temp:g}")
    ax.legend(frameon=False)
    fig.tight_layout()
    _save(fig, path)
    plt.close(fig)


def plot_wavefunctions(solutions, t_classical, path):
    """One panel per solution: Re psi, Im psi, |psi|^2 and (T0/T)^(1/2)."""
    plt = _pyplot()
    fig, axes = plt.subplots(len(solutions), 1, figsize=(7, 3 * len(solutions)), sharex=True,
                             squeeze=False)
    for ax, sol, temp in zip(axes[:, 0], solutions, t_classical):
        g, psi = sol.grid, sol.psi
        ax.plot(g, psi.imag, color=_COLORS["im"], lw=0.8, label="Im psi")
        ax.plot(g, psi.real, color=_COLORS["re"], lw=0.8, label="Re psi")
        ax.plot(g, np.abs(psi) ** 2, color=_COLORS["abs2"], lw=1.0, label="|psi|^2")
        ax.plot(g, np.sqrt(sol.scenario.t0_temp / temp), color=_COLORS["ratio"], lw=1.2,
                label="(T0/T)^1/2")
        ax.axvline(sol.scenario.g0, color="gray", lw=0.5)
        ax.set_ylabel(sol.choice)
    axes[0, 0].legend(frameon=False, ncol=4, fontsize="small")
    axes[-1, 0].set_xlabel("g")
    fig.tight_layout()
    _save(fig, path)
    plt.close(fig)


def plot_comparison(rows, g_curve, t_curve, path):
    """Classical T(g) curve against half-period wave averages."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(g_curve, t_curve, color="black", lw=1.2, label="trajectory")
    g_mid = [r[0] for r in rows]
    t_wave = [r[1] for r in rows]
    ax.plot(g_mid, t_wave, "o", mfc="none", color="tab:red", label="wave <T>")
    ax.set_xlabel("g")
    ax.set_ylabel("T")
    ax.legend(frameon=False, loc="lower right")
    fig.tight_layout()
    _save(fig, path)
    plt.close(fig)
