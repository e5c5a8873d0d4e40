"""Matplotlib figures written next to JSON reports."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _label(x) -> str:
    return "{" + ",".join(sorted(x)) + "}" if x else "∅"


def plot_configurations(configs: Sequence[frozenset], path: str | Path, title: str = "") -> Path:
    """Hasse diagram of configurations under inclusion, drawn by size."""
    layers: dict[int, list[frozenset]] = {}
    for x in configs:
        layers.setdefault(len(x), []).append(x)
    pos = {}
    for k, xs in layers.items():
        for i, x in enumerate(xs):
            pos[x] = (i - (len(xs) - 1) / 2, k)
    width = max(len(xs) for xs in layers.values()) if layers else 1
    fig, ax = plt.subplots(figsize=(max(4, 1.6 * width), 1.2 * (len(layers) + 1)))
    cset = set(configs)
    for x in configs:
        for e in x:
            y = x - {e}
            if y in cset:
                ax.plot([pos[y][0], pos[x][0]], [pos[y][1], pos[x][1]], color="0.6", lw=1, zorder=1)
    for x, (px, py) in pos.items():
        ax.text(px, py, _label(x), ha="center", va="center", fontsize=8,
                bbox=dict(boxstyle="round", fc="white", ec="0.3"), zorder=2)
    ax.set_axis_off()
    ax.set_title(title)
    ax.margins(0.2)
    return _save(fig, path)


def plot_distribution(labels: Sequence[str], probs: Sequence[float], path: str | Path, title: str = "") -> Path:
    fig, ax = plt.subplots(figsize=(max(4, 0.9 * len(labels)), 3))
    ax.bar(range(len(labels)), probs, color="tab:blue")
    ax.set_xticks(range(len(labels)), labels, rotation=30, ha="right", fontsize=8)
    ax.set_ylabel("probability")
    ax.set_ylim(0, 1)
    ax.set_title(title)
    return _save(fig, path)


def plot_matrix(
    matrix: Sequence[Sequence[float]],
    rows: Sequence[str],
    cols: Sequence[str],
    path: str | Path,
    title: str = "",
) -> Path:
    """Payoff matrix heatmap with the value printed in each cell."""
    fig, ax = plt.subplots(figsize=(1.2 * len(cols) + 2, 0.5 * len(rows) + 1.5))
    im = ax.imshow(matrix, cmap="RdBu", aspect="auto")
    ax.set_xticks(range(len(cols)), cols, fontsize=8)
    ax.set_yticks(range(len(rows)), rows, fontsize=8)
    for i, r in enumerate(matrix):
        for j, v in enumerate(r):
            ax.text(j, i, f"{v:.3g}", ha="center", va="center", fontsize=7)
    fig.colorbar(im, ax=ax)
    ax.set_title(title)
    return _save(fig, path)


def _save(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
