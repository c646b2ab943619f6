"""Matplotlib line plots of scan columns, written next to the CSV output."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

# fixed salt and no date stamp so SVGs are reproducible
matplotlib.rcParams["svg.hashsalt"] = "barrier-delay"

YLABELS = {
    "tau_t": r"$\tau_t/\tau_c$",
    "tau_r": r"$\tau_r/\tau_c$",
    "tau_1": r"$\tau_1/\tau_c$",
    "T": r"$T$",
    "Tc": r"$(k_2/k_1)\,T$",
    "phi1": r"$\phi_1$ (unwrapped)",
    "phi2": r"$\phi_2$ (unwrapped)",
}


def plot_series(result, quantity: str, path, title: str | None = None,
                figsize=(6.0, 3.8)) -> None:
    """Single-series line chart of ``quantity`` against ``k0*a``."""
    y = np.asarray(getattr(result, quantity), dtype=float)
    fig, ax = plt.subplots(figsize=figsize)
    try:
        ax.plot(result.k0a, y, lw=1.2, color="k")
        ax.set_xlabel(r"$k_0 a$")
        ax.set_ylabel(YLABELS.get(quantity, quantity))
        ax.axhline(0.0, color="0.7", lw=0.6, zorder=0)
        ax.set_xlim(result.k0a[0], result.k0a[-1])
        if title:
            ax.set_title(title, fontsize=10)
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
    finally:
        plt.close(fig)


def plot_packet(profiles, path, figsize=(6.0, 3.8)) -> None:
    """Incident, reflected and transmitted |psi|^2 against time."""
    fig, ax = plt.subplots(figsize=figsize)
    try:
        for y, lab, ls in ((profiles.incident, "incident", "-"),
                           (profiles.reflected, "reflected", "--"),
                           (profiles.transmitted, "transmitted", ":")):
            ax.plot(profiles.t, y / y.max(), ls, lw=1.1, label=lab)
        ax.set_xlabel("t")
        ax.set_ylabel(r"$|\psi|^2$ (peak-normalised)")
        ax.legend(frameon=False, fontsize=8)
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
    finally:
        plt.close(fig)
