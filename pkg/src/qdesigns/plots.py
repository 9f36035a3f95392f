"""Figure rendering for fit reports.

Renders the per-delay fit trajectory next to the CSV artifact.  The Agg
backend is forced so rendering works headless.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .envdim import KStarFit


def render_fit_figure(fits: list[tuple[float, KStarFit]], path: str) -> str:
    """Plot k*, epsilon* (and w for emission fits) against delay.

    Returns the written path.
    """
    if not fits:
        raise ValueError("no fits to plot")
    delays = [d for d, _ in fits]
    k = [f.k_star for _, f in fits]
    eps = [f.epsilon_star for _, f in fits]
    emission = any(f.model == "emission" for _, f in fits)
    rows = 3 if emission else 2
    fig, axes = plt.subplots(rows, 1, figsize=(6.0, 2.2 * rows), sharex=True)
    axes[0].plot(delays, k, "o-", color="tab:blue")
    axes[0].set_ylabel(r"$k^*$")
    axes[1].plot(delays, eps, "s-", color="tab:red")
    axes[1].set_ylabel(r"$\epsilon^*$")
    if emission:
        w = [0.0 if f.w is None else f.w for _, f in fits]
        axes[2].plot(delays, w, "d-", color="tab:green")
        axes[2].set_ylabel("w")
    axes[-1].set_xlabel(r"delay ($\mu$s)")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
