"""Figure rendering for CLI reports; files only, no interactive backend."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .bell import TSIRELSON_BOUND


def render_sweep(rows, path: str) -> None:
    """Violation profile along a settings path, with both bounds marked."""
    values = np.array([value for _, value in rows])
    fraction = np.linspace(0.0, 1.0, len(values))
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(fraction, values, marker="o", markersize=3, lw=1.2, color="tab:blue")
    ax.axhline(2.0, color="tab:gray", lw=1.0, ls="--", label="classical bound 2")
    ax.axhline(
        TSIRELSON_BOUND, color="tab:red", lw=1.0, ls=":",
        label=r"quantum bound $2\sqrt{2}$",
    )
    ax.set_xlabel("position along settings path")
    ax.set_ylabel("max CHSH variant")
    ax.legend(loc="lower right", fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_sample(frequencies, probs, errors, path: str) -> None:
    """Observed outcome frequencies with error bars against exact weights."""
    frequencies = np.asarray(frequencies, dtype=float)
    probs = np.asarray(probs, dtype=float)
    errors = np.asarray(errors, dtype=float)
    x = np.arange(frequencies.size)
    fig, ax = plt.subplots(figsize=(max(6.0, 0.45 * x.size), 4.0))
    ax.bar(x, frequencies, yerr=errors, width=0.7, color="tab:blue",
           alpha=0.75, label="observed", capsize=2)
    ax.plot(x, probs, "k_", markersize=12, label="exact")
    ax.set_xlabel("outcome index")
    ax.set_ylabel("frequency")
    ax.set_xticks(x)
    ax.legend(loc="upper right", fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
