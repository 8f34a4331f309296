"""SVG heatmap of a region scan. Presentational only; the CSV is the data."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.colors import to_rgb  # noqa: E402
from matplotlib.patches import Patch  # noqa: E402

from .certificates import RegionGrid, Verdict  # noqa: E402

PALETTE = {
    Verdict.CERTIFIED: "#1b9e77",
    Verdict.CONDITION_FAILED: "#d95f02",
    Verdict.HYPOTHESIS_FAILED: "#bdbdbd",
}
SIZE_PX = 800
DPI = 72  # SVG user units per inch in matplotlib


def verdict_rgba(grid: RegionGrid) -> np.ndarray:
    """RGBA image indexed [beta, alpha]; opacity grows with |margin|."""
    na, nb = grid.verdicts.shape
    img = np.ones((nb, na, 4))
    m = np.abs(np.asarray(grid.margins, dtype=float))
    finite = m[np.isfinite(m)]
    scale = np.max(finite) if finite.size and np.max(finite) > 0 else 1.0
    m = np.where(np.isnan(m), 0.0, np.minimum(m, scale))
    for i in range(na):
        for j in range(nb):
            img[j, i, :3] = to_rgb(PALETTE[grid.verdicts[i, j]])
            # keep every cell visible, shade the rest by relative margin
            img[j, i, 3] = 0.45 + 0.55 * min(m[i, j] / scale, 1.0)
    return img


def _edges(g):
    g = np.asarray(g, dtype=float)
    if g.size == 1:
        return g[0] - 0.5, g[0] + 0.5
    h = 0.5 * (g[1] - g[0]), 0.5 * (g[-1] - g[-2])
    return g[0] - h[0], g[-1] + h[1]


def render_svg(grid: RegionGrid, path, title: str | None = None) -> None:
    """Write the three-colour verdict map of ``grid`` to ``path`` (800x800)."""
    fig, ax = plt.subplots(figsize=(SIZE_PX / DPI, SIZE_PX / DPI), dpi=DPI)
    extent = (*_edges(grid.alpha_grid), *_edges(grid.beta_grid))
    ax.imshow(verdict_rgba(grid), origin="lower", extent=extent, aspect="auto", interpolation="nearest")
    lo = max(extent[0], extent[2])
    hi = min(extent[1], extent[3])
    if hi > lo:
        ax.plot([lo, hi], [lo, hi], color="k", lw=0.6, ls="--")
    ax.set_xlabel(r"$\alpha$")
    ax.set_ylabel(r"$\beta$")
    ax.set_title(title or f"{grid.kind.value} verdicts")
    ax.legend(
        handles=[Patch(color=c, label=v.value) for v, c in PALETTE.items()],
        loc="upper left",
        fontsize=8,
    )
    fig.savefig(path, format="svg")
    plt.close(fig)
