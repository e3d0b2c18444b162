"""Figure rendering for the report commands (matplotlib, headless)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

# fixed palette per class; "all" uses a neutral ramp
PALETTES = {
    "all": "Greys",
    "globally": "Greens",
    "locally": "Oranges",
    "nonidentifiable": "Reds",
}

TITLES = {
    "all": "All models",
    "globally": "Identifiable models",
    "locally": "Locally identifiable models",
    "nonidentifiable": "Non-identifiable models",
}


def render_heatmap(grid: list[list[int]], path: str | Path, class_filter: str = "all") -> Path:
    """Shade each (inputs, leaks) cell by its count and print the count in it.

    The SVG is written without timestamps and with a fixed hash salt so
    repeated runs produce identical files.
    """
    path = Path(path)
    matplotlib.rcParams["svg.hashsalt"] = "compartdb"
    fig, ax = plt.subplots(figsize=(6, 3.2))
    try:
        im = ax.imshow(grid, cmap=PALETTES.get(class_filter, "Greys"), aspect="auto", origin="lower")
        peak = max(max(r) for r in grid) or 1
        for i, row in enumerate(grid):
            for j, v in enumerate(row):
                ax.text(j, i, str(v), ha="center", va="center",
                        color="white" if v > 0.6 * peak else "black", fontsize=9)
        ax.set_xticks(range(len(grid[0])))
        ax.set_yticks(range(len(grid)))
        ax.set_xlabel("number of leaks")
        ax.set_ylabel("number of inputs")
        ax.set_title(TITLES.get(class_filter, class_filter))
        fig.colorbar(im, ax=ax)
        fig.tight_layout()
        fmt = path.suffix.lstrip(".").lower() or "svg"
        meta = {"Date": None} if fmt in ("svg", "pdf") else None
        fig.savefig(path, format=fmt, metadata=meta)
    finally:
        plt.close(fig)
    return path
