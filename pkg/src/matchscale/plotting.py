"""
Scaling figure for benchmark output (needs matplotlib).
"""

from __future__ import annotations

import os
from collections import defaultdict
from statistics import median
from typing import Sequence

from .bench import BenchRecord


def plot_scaling(records: Sequence[BenchRecord], directory: str) -> str:
    """Write a log-log plot of median time against m, one line per
    (solver, eps), and return the file path."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    series: dict[str, dict[int, list[float]]] = defaultdict(
        lambda: defaultdict(list))
    for rec in records:
        label = rec.solver if rec.eps is None else f"{rec.solver} eps={rec.eps:g}"
        series[label][rec.m].append(rec.time_ms)

    os.makedirs(directory, exist_ok=True)
    fig, ax = plt.subplots(figsize=(6, 4.5))
    for label in sorted(series):
        pts = sorted((m, median(ts)) for (m, ts) in series[label].items())
        ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o",
                label=label)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("edges m")
    ax.set_ylabel("median wall time (ms)")
    ax.set_title("matchscale running time")
    ax.grid(True, which="both", alpha=0.3)
    if series:
        ax.legend(fontsize="small")
    path = os.path.join(directory, "scaling.png")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
