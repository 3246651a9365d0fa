"""Matplotlib figures: tiling patches, planar layouts and height maps."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.colors import ListedColormap  # noqa: E402
from matplotlib.patches import Rectangle  # noqa: E402

from . import plane  # noqa: E402


def _finish(fig, ax, path):
    ax.set_aspect("equal")
    ax.autoscale_view()
    ax.set_axis_off()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_polyomino(cells, path, title: str | None = None, color: str = "#80b1d3"):
    fig, ax = plt.subplots(figsize=(4, 4))
    for x, y in cells:
        ax.add_patch(Rectangle((x, y), 1, 1, facecolor=color, edgecolor="black", lw=0.8))
    if title:
        ax.set_title(title, fontsize=9)
    return _finish(fig, ax, path)


def plot_tiling_patch(cells, cert: plane.TilingCertificate, path, copies: int = 9):
    """Copies of the tile around the origin, one palette color per copy."""
    patch = plane.tiling_patch(cells, cert, copies)
    fig, ax = plt.subplots(figsize=(5, 5))
    for k, tile in enumerate(patch.tiles):
        color = plane.PALETTE[k % len(plane.PALETTE)]
        for x, y in tile:
            ax.add_patch(Rectangle((x, y), 1, 1, facecolor=color, edgecolor="none"))
        for x, y in tile:
            # outline only the tile boundary
            for dx, dy, seg in ((1, 0, ((x + 1, x + 1), (y, y + 1))), (-1, 0, ((x, x), (y, y + 1))),
                                (0, 1, ((x, x + 1), (y + 1, y + 1))), (0, -1, ((x, x + 1), (y, y)))):
                if (x + dx, y + dy) not in tile:
                    ax.plot(*seg, color="black", lw=0.8)
    ax.set_title(cert.kind, fontsize=9)
    return _finish(fig, ax, path)


def plot_layout(layout, path, labels: bool = True):
    """Planar layout of a surface unfolding, squares labelled by face."""
    fig, ax = plt.subplots(figsize=(6, 6))
    for face, sq in zip(layout.faces, layout.squares):
        x, y = sq.pos
        ax.add_patch(Rectangle((x, y), 1, 1, facecolor="#fdb462", edgecolor="black", lw=0.6))
        if labels:
            ax.text(x + 0.5, y + 0.5, face[1], ha="center", va="center", fontsize=6)
    return _finish(fig, ax, path)


def plot_heightmap(hmap: dict, path, title: str | None = None):
    """Top view with the visible z-layer number written in every column."""
    xs = [x for x, _ in hmap]
    ys = [y for _, y in hmap]
    x0, y0 = min(xs), min(ys)
    w, h = max(xs) - x0 + 1, max(ys) - y0 + 1
    grid = [[float("nan")] * w for _ in range(h)]
    for (x, y), z in hmap.items():
        grid[y - y0][x - x0] = z
    levels = sorted(set(hmap.values()))
    cmap = ListedColormap(plane.PALETTE[: max(len(levels), 1)])
    fig, ax = plt.subplots(figsize=(max(4, w / 3), max(4, h / 3)))
    ax.imshow(grid, origin="lower", cmap=cmap, extent=(x0, x0 + w, y0, y0 + h),
              vmin=levels[0] - 0.5, vmax=levels[-1] + 0.5)
    for (x, y), z in hmap.items():
        ax.text(x + 0.5, y + 0.5, str(z), ha="center", va="center", fontsize=6)
    if title:
        ax.set_title(title, fontsize=9)
    return _finish(fig, ax, path)
