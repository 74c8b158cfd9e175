"""PNG figures for CLI reports (matplotlib, Agg backend)."""
from __future__ import annotations

from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .lattice import PeriodicFunction, Tile  # noqa: E402
from .render import render_rgb  # noqa: E402

DPI = 120


def _save(fig, path) -> None:
    fig.tight_layout()
    fig.savefig(path, format="png", dpi=DPI)
    plt.close(fig)


def tiling_figure(A, F: Tile, window, path, title: str | None = None) -> None:
    """The renderer's picture with integer axes."""
    x0, y0, w, h = window
    img = render_rgb(A, F, x0, y0, w, h)
    side = max(3.0, min(10.0, max(w, h) / 8))
    fig, ax = plt.subplots(figsize=(side, side * h / w + 0.5))
    ax.imshow(img, extent=(x0 - 0.5, x0 + w - 0.5, y0 - 0.5, y0 + h - 0.5),
              interpolation="nearest")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    if title:
        ax.set_title(title)
    _save(fig, path)


def function_figure(fs: Sequence[tuple[str, PeriodicFunction]], window, path) -> None:
    """Heat maps of planar periodic functions on a common window."""
    x0, y0, w, h = window
    n = max(1, len(fs))
    fig, axes = plt.subplots(1, n, figsize=(3.2 * n, 3.2), squeeze=False)
    for ax, (name, f) in zip(axes[0], fs):
        vals = np.array([[float(f((x, y))) for x in range(x0, x0 + w)]
                         for y in range(y0, y0 + h)])
        im = ax.imshow(vals, origin="lower", interpolation="nearest", vmin=0,
                       extent=(x0 - 0.5, x0 + w - 0.5, y0 - 0.5, y0 + h - 0.5))
        ax.set_title(name, fontsize=9)
        fig.colorbar(im, ax=ax, shrink=0.8)
    _save(fig, path)


def bar_figure(labels: Sequence, values: Sequence[float], path, title: str = "",
               ylabel: str = "") -> None:
    fig, ax = plt.subplots(figsize=(max(4.0, 0.4 * len(labels) + 2), 3.2))
    ax.bar(range(len(values)), values, color="#4477aa")
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels([str(l) for l in labels], rotation=60, ha="right", fontsize=7)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    _save(fig, path)


def label_figure(labels: np.ndarray, window, path, title: str = "") -> None:
    """Integer labels on a window (``labels[i, j]`` at ``(x0 + i, y0 + j)``); -1 is blank."""
    x0, y0, w, h = window
    data = np.ma.masked_less(labels.T.astype(float), 0)
    fig, ax = plt.subplots(figsize=(4.5, 4.5 * h / w + 0.4))
    ax.imshow(data, origin="lower", interpolation="nearest", cmap="tab10",
              extent=(x0 - 0.5, x0 + w - 0.5, y0 - 0.5, y0 + h - 0.5))
    if title:
        ax.set_title(title)
    _save(fig, path)
