"""Figure rendering for the CLI report path.

Headless by construction: the Agg backend is forced before pyplot loads,
so rendering works in CI and over ssh.  Functions take a target path and
return it, writing a single PNG.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402


def render_centrality_figure(path, columns: Mapping[str, np.ndarray],
                             title: str = "centrality") -> str:
    """Scatter of one or more score columns over node index."""
    fig, ax = plt.subplots(figsize=(8, 4.5))
    for name, scores in columns.items():
        ax.plot(np.arange(len(scores)), scores, linestyle="none", marker=".",
                markersize=4, label=name)
    ax.set_xlabel("node")
    ax.set_ylabel("score")
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    if columns:
        ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return str(path)


def render_timing_figure(path, results: Sequence) -> str:
    """Log-log wall time vs graph size, one series per algorithm/rule."""
    series: dict[str, list[tuple[int, float]]] = {}
    for r in results:
        rule = getattr(r, "rule", None)
        key = f"{r.algorithm} ({rule})" if rule else r.algorithm
        series.setdefault(key, []).append((r.n, r.wall_seconds))
    fig, ax = plt.subplots(figsize=(8, 4.5))
    for key in sorted(series):
        pts = sorted(series[key])
        ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o", label=key)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("nodes")
    ax.set_ylabel("median wall seconds")
    ax.set_title("runtime by graph size")
    ax.grid(True, which="both", alpha=0.3)
    if series:
        ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return str(path)
