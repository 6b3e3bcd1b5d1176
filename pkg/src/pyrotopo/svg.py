"""Minimal SVG emitters for site plans and scalar heatmaps.

No plotting dependency: each grid cell becomes one <rect>.  Heatmap values
map onto a linear two-anchor color ramp, documented at `ramp_color`.
"""

from __future__ import annotations

import math

import numpy as np

from .layout import CellKind, Layout

CELL_PX = 12

BLOCK_FILL = "#1a1a1a"
AISLE_FILL = "#f5f0e8"
UNREACHABLE_FILL = "#9a9a9a"

# Linear ramp anchors (RGB): low values pale yellow, high values deep red.
RAMP_LOW = (255, 247, 188)
RAMP_HIGH = (166, 15, 20)


def ramp_color(t: float) -> str:
    """Linear interpolation between RAMP_LOW (t=0) and RAMP_HIGH (t=1).

    Each channel is round(low + t * (high - low)); t is clamped to [0, 1].
    """
    t = min(1.0, max(0.0, t))
    rgb = (round(lo + t * (hi - lo)) for lo, hi in zip(RAMP_LOW, RAMP_HIGH))
    return "#{:02x}{:02x}{:02x}".format(*rgb)


def _document(width: int, height: int, body: list[str]) -> str:
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" '
        f'width="{width * CELL_PX}" height="{height * CELL_PX}" '
        f'viewBox="0 0 {width * CELL_PX} {height * CELL_PX}">'
    )
    return "\n".join([head, *body, "</svg>"]) + "\n"


def _rect(row: int, col: int, fill: str) -> str:
    return (
        f'<rect x="{col * CELL_PX}" y="{row * CELL_PX}" '
        f'width="{CELL_PX}" height="{CELL_PX}" fill="{fill}"/>'
    )


def render_site_plan(layout: Layout) -> str:
    """Site plan as SVG: blocks solid dark, aisles pale."""
    body = [_rect(0, 0, AISLE_FILL).replace(
        f'width="{CELL_PX}" height="{CELL_PX}"',
        f'width="{layout.width * CELL_PX}" height="{layout.height * CELL_PX}"',
    )]
    for r, c in np.argwhere(layout.cells == CellKind.BLOCK):
        body.append(_rect(int(r), int(c), BLOCK_FILL))
    return _document(layout.width, layout.height, body)


def render_heatmap(layout: Layout, values: np.ndarray) -> str:
    """Scalar field over aisle cells as an SVG heatmap.

    Blocks are drawn solid; NaN entries on aisle cells are skipped; +inf
    aisle cells (unreachable) get a fixed gray.  Finite values are scaled
    linearly from their min (ramp t=0) to their max (t=1).
    """
    if values.shape != layout.cells.shape:
        raise ValueError(
            f"field shape {values.shape} does not match grid {layout.cells.shape}"
        )
    finite = values[np.isfinite(values)]
    lo = float(finite.min()) if finite.size else 0.0
    hi = float(finite.max()) if finite.size else 1.0
    span = hi - lo

    body = []
    for r in range(layout.height):
        for c in range(layout.width):
            if layout.cells[r, c] == CellKind.BLOCK:
                body.append(_rect(r, c, BLOCK_FILL))
                continue
            v = values[r, c]
            if math.isnan(v):
                continue
            if math.isinf(v):
                body.append(_rect(r, c, UNREACHABLE_FILL))
            else:
                t = (v - lo) / span if span > 0 else 0.0
                body.append(_rect(r, c, ramp_color(t)))
    return _document(layout.width, layout.height, body)
