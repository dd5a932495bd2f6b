"""Self-contained SVG line plots (no display, reproducible output)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("svg")
matplotlib.rcParams["svg.hashsalt"] = "frontlab"

import matplotlib.pyplot as plt  # noqa: E402


def line_plot(path: str | Path, x, series: dict[str, object],
              xlabel: str = "", ylabel: str = "", title: str = "") -> Path:
    """Write one SVG with a labeled line per series; returns the path."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for label, y in series.items():
        ax.plot(x, y, label=label, linewidth=1.2)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    if len(series) > 1:
        ax.legend(frameon=False)
    ax.grid(True, alpha=0.3)
    path = Path(path)
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path
