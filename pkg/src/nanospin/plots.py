"""Figure rendering for CLI reports (matplotlib, file output only).

SVG output is kept structurally deterministic: a fixed hash salt for
element ids and no embedded creation date.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "nanospin"

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .output import resolve_path


def _save(fig, path: str | Path) -> Path:
    path = resolve_path(path)
    kwargs = {"metadata": {"Date": None}} if path.suffix == ".svg" else {}
    fig.savefig(path, dpi=150, **kwargs)
    plt.close(fig)
    return path


def plot_polarization(trace, path: str | Path) -> Path:
    """P1 and the other-spin polarization over the trace grid."""
    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    ax.plot(trace.taus, trace.p1, lw=0.9, label="spin 1")
    ax.plot(trace.taus, trace.p_other, lw=0.9, label="any other spin")
    ax.axhline(1.0 / 3.0, color="0.6", ls="--", lw=0.7, label="1/3")
    ax.set_xlabel(r"$\tau = gt/2$")
    ax.set_ylabel("polarization")
    ax.set_title(f"N = {trace.cluster.n_spins} spin cluster")
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    return _save(fig, path)


def plot_noise(times, analytic, approx, mc_mean, mc_stderr, n, path) -> Path:
    """Noise-averaged trace: analytic sum, Gaussian approximation, MC band."""
    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    ax.plot(times, analytic, lw=0.9, label="analytic average")
    if approx is not None:
        ax.plot(times, approx, lw=0.8, ls=":", label="Gaussian approximation")
    if mc_mean is not None:
        ax.plot(times, mc_mean, lw=0.7, alpha=0.8, label="Monte Carlo mean")
        ax.fill_between(times, mc_mean - 3 * mc_stderr, mc_mean + 3 * mc_stderr,
                        alpha=0.25, lw=0, label=r"MC $\pm 3\,$stderr")
    ax.axhline(1.0 / 3.0, color="0.6", ls="--", lw=0.7)
    ax.set_xlabel("t (s)")
    ax.set_ylabel("polarization of spin 1")
    ax.set_title(f"N = {n}, fluctuating cavity volume")
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    return _save(fig, path)


def plot_lineshape(shape, path: str | Path) -> Path:
    """Spectrum with the FID as an inset."""
    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    ax.plot(shape.omega_grid, shape.spectrum, lw=0.9)
    ax.set_xlabel(r"$\omega$ (rad/s)")
    ax.set_ylabel(r"normalized line shape")
    ax.set_title(f"N = {shape.n_spins}, T2 = {shape.t2:g} s")
    inset = ax.inset_axes([0.66, 0.6, 0.32, 0.35])
    inset.plot(shape.t_grid, shape.fid, lw=0.6)
    inset.set_title("FID", fontsize=7)
    inset.tick_params(labelsize=6)
    fig.tight_layout()
    return _save(fig, path)
