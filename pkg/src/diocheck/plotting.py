"""Figure rendering for the CLI report paths.

Every command that writes delimited output gets a PNG next to it with the
same stem.  Figures are rendered headless on the Agg backend with pinned
dpi and metadata so repeated runs produce identical files.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

GOLDEN = (1.0 + math.sqrt(5.0)) / 2.0
_SAVE_OPTS = {"dpi": 120, "metadata": {"Software": "diocheck"}}


def figure_path(out_path: str | Path) -> Path:
    return Path(out_path).with_suffix(".png")


def _new_axes(width: float = 6.4):
    fig, ax = plt.subplots(figsize=(width, width / GOLDEN), layout="constrained")
    return fig, ax


def _finish(fig, path: Path) -> Path:
    fig.savefig(path, **_SAVE_OPTS)
    plt.close(fig)
    return path


def plot_expsum_scan(xs: Sequence[float], abs_vals: Sequence[float],
                     bounds: Sequence[float], out_path: str | Path,
                     label: str = "|L(x)|") -> Path:
    """|sum| against x with its envelope; log axes when x spans signs/decades."""
    path = figure_path(out_path)
    fig, ax = _new_axes()
    xs = list(xs)
    if all(x > 0 for x in xs) and max(xs) / min(xs) > 50:
        ax.loglog(xs, abs_vals, lw=0.8, label=label)
        ax.loglog(xs, bounds, lw=0.8, ls="--", color="gray", label="bound")
    else:
        ax.plot(xs, abs_vals, lw=0.8, label=label)
        ax.plot(xs, bounds, lw=0.8, ls="--", color="gray", label="bound")
    ax.set_xlabel("x")
    ax.set_ylabel("magnitude")
    ax.legend(frameon=False)
    return _finish(fig, path)


def plot_scan(counts: Sequence[int], targets: Sequence[float],
              ratios: Sequence[float], out_path: str | Path) -> Path:
    """Two panels: histogram of window counts, count/prediction ratio vs R."""
    path = figure_path(out_path)
    fig, (ax1, ax2) = plt.subplots(
        1, 2, figsize=(9.6, 9.6 / 2 / GOLDEN), layout="constrained")
    top = max(counts) if counts else 1
    ax1.hist(counts, bins=range(0, top + 2), align="left",
             rwidth=0.85, color="#4477aa")
    ax1.set_xlabel("solutions per target")
    ax1.set_ylabel("targets")
    finite = [(t, r) for t, r in zip(targets, ratios) if math.isfinite(r)]
    if finite:
        ax2.plot([t for t, _ in finite], [r for _, r in finite],
                 ".", ms=3, color="#cc6677")
        ax2.axhline(1.0, lw=0.8, ls="--", color="gray")
    ax2.set_xlabel("target R")
    ax2.set_ylabel("weighted count / prediction")
    return _finish(fig, path)
