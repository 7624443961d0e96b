"""Matplotlib figure emission for clouds, covers, nerves and barcodes.

Figures are rendered headless and written to files; the format follows the
file extension (svg or png).
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib.patches import Circle, Polygon

from .complexes import SimplicialComplex
from .errors import SchemaError
from .geometry import PointCloud
from .homology import Barcode


def save_cloud_figure(cloud: PointCloud, path: str, radius: float | None = None,
                      nerve: SimplicialComplex | None = None, title: str = "") -> str:
    """Scatter a planar cloud with optional cover balls and nerve skeleton
    drawn at the point positions."""
    if cloud.d != 2:
        raise SchemaError("cloud figures require d = 2")
    fig, ax = plt.subplots(figsize=(5, 5))
    xs = [p[0] for p in cloud.points]
    ys = [p[1] for p in cloud.points]
    if radius is not None:
        for p in cloud.points:
            ax.add_patch(Circle(p, radius, facecolor="tab:blue", alpha=0.12,
                                edgecolor="tab:blue", linewidth=0.8))
    if nerve is not None:
        for t in nerve.simplices_of_dim(2):
            ax.add_patch(Polygon([cloud.points[v] for v in t],
                                 facecolor="tab:orange", alpha=0.35, edgecolor="none"))
        for e in nerve.simplices_of_dim(1):
            a, b = cloud.points[e[0]], cloud.points[e[1]]
            ax.plot([a[0], b[0]], [a[1], b[1]], color="tab:orange", linewidth=1.5)
    ax.scatter(xs, ys, s=30, color="black", zorder=5)
    for i, p in enumerate(cloud.points):
        ax.annotate(str(i), p, textcoords="offset points", xytext=(4, 4), fontsize=8)
    ax.set_aspect("equal")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def save_barcode_figure(bc: Barcode, path: str, title: str = "",
                        max_value: float | None = None) -> str:
    """Horizontal interval plot, one band of bars per homology degree."""
    degrees = sorted(bc.bars) or [0]
    finite = [d for bars in bc.bars.values() for _, d in bars if d is not None]
    births = [b for bars in bc.bars.values() for b, _ in bars]
    top = max_value if max_value is not None else (max(finite + births) * 1.15 if finite + births else 1.0)
    fig, axes = plt.subplots(len(degrees), 1, figsize=(6, 1.2 + 1.1 * len(degrees)),
                             sharex=True, squeeze=False)
    for ax, n in zip(axes[:, 0], degrees):
        bars = bc.degree(n)
        for k, (b, d) in enumerate(bars):
            end = d if d is not None else top
            ax.hlines(k + 1, b, end, color="tab:red" if d is None else "tab:blue",
                      linewidth=2.5)
            if d is None:
                ax.annotate("inf", (end, k + 1), fontsize=7, color="tab:red",
                            textcoords="offset points", xytext=(2, -2))
        ax.set_ylabel(f"H{n}")
        ax.set_ylim(0, max(2, len(bars) + 1))
        ax.set_yticks([])
    axes[-1, 0].set_xlabel("radius")
    if title:
        axes[0, 0].set_title(title)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def save_complex_figure(cloud: PointCloud, cx: SimplicialComplex, path: str,
                        title: str = "") -> str:
    """A 2D complex drawn at the cloud's coordinates."""
    return save_cloud_figure(cloud, path, radius=None, nerve=cx, title=title)
