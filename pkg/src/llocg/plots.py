"""Figure rendering for benchmark runs: convergence and regret curves to PNG."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["render_gap_figure", "render_regret_figure"]


def render_gap_figure(path, per_seed_traces, envelope=None, title=""):
    """Semilog gap-vs-iteration curves, one line per seed, optional envelope.

    ``per_seed_traces`` maps seed -> (ts, gaps); ``envelope`` is an optional
    (ts, bound) pair drawn dashed.
    """
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for seed, (ts, gaps) in sorted(per_seed_traces.items()):
        gaps = np.maximum(np.asarray(gaps, dtype=float), 1e-300)
        ax.semilogy(ts, gaps, lw=1.2, label=f"seed {seed}")
    if envelope is not None:
        ts, bound = envelope
        ax.semilogy(ts, bound, "k--", lw=1.0, label="certified envelope")
    ax.set_xlabel("linear-oracle calls t")
    ax.set_ylabel("objective gap")
    if title:
        ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def render_regret_figure(path, per_seed_curves, title="", bound=None):
    """Cumulative-regret curves per seed with an optional horizontal bound."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for seed, (ts, regret) in sorted(per_seed_curves.items()):
        ax.plot(ts, regret, lw=1.2, label=f"seed {seed}")
    if bound is not None:
        ax.axhline(bound, color="k", ls="--", lw=1.0, label="proof bound")
    ax.set_xlabel("round t")
    ax.set_ylabel("cumulative regret")
    if title:
        ax.set_title(title)
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
