"""Market layouts on a discrete cell grid.

A layout is a rectangular grid of cells, each either a retail BLOCK (a
compact cluster of stalls that ignites and burns as a unit) or a walkable
AISLE cell.  Everything outside the grid is exterior.  Generated layouts
place blocks with one-block-width lattice spacing (two cells), so no two
blocks are ever edge-adjacent.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from typing import Union

import numpy as np


class LayoutError(ValueError):
    """Invalid construction parameters or malformed layout."""


class SitePlanParseError(LayoutError):
    """Malformed site-plan text; carries 1-based line/column of the defect."""

    def __init__(self, message: str, line: int, col: int | None = None):
        self.line = line
        self.col = col
        where = f"line {line}" if col is None else f"line {line}, column {col}"
        super().__init__(f"{message} ({where})")


class CellKind(IntEnum):
    AISLE = 0
    BLOCK = 1


BLOCK_CHAR = "B"
AISLE_CHAR = "."


@dataclass(frozen=True)
class BlockSite:
    """A single block cell, addressed in grid coordinates."""

    row: int
    col: int

    @property
    def block_coords(self) -> tuple[int, int]:
        """Position on the block-width lattice (one block-width = two cells)."""
        return (self.row // 2, self.col // 2)


@dataclass
class Layout:
    height: int
    width: int
    cells: np.ndarray  # uint8, CellKind values, shape (height, width)
    name: str = ""

    def __post_init__(self):
        self.cells = np.asarray(self.cells, dtype=np.uint8)
        if self.height < 1 or self.width < 1:
            raise LayoutError("layout must be at least 1x1")
        if self.cells.shape != (self.height, self.width):
            raise LayoutError(
                f"cell matrix shape {self.cells.shape} does not match "
                f"{self.height}x{self.width}"
            )
        if not np.isin(self.cells, (CellKind.AISLE, CellKind.BLOCK)).all():
            raise LayoutError("cells must be BLOCK or AISLE")
        if not (self.cells == CellKind.BLOCK).any():
            raise LayoutError("layout must contain at least one block")

    def __eq__(self, other) -> bool:
        # Structural equality: the grid alone; the name is a free label.
        if not isinstance(other, Layout):
            return NotImplemented
        return (
            self.height == other.height
            and self.width == other.width
            and bool((self.cells == other.cells).all())
        )

    @property
    def n_blocks(self) -> int:
        return int((self.cells == CellKind.BLOCK).sum())

    def block_positions(self) -> np.ndarray:
        """(k, 2) array of block cell coordinates in row-major scan order."""
        return np.argwhere(self.cells == CellKind.BLOCK)

    def block_sites(self) -> list[BlockSite]:
        return [BlockSite(int(r), int(c)) for r, c in self.block_positions()]

    def is_block(self, row: int, col: int) -> bool:
        return (
            0 <= row < self.height
            and 0 <= col < self.width
            and self.cells[row, col] == CellKind.BLOCK
        )


# ---------------------------------------------------------------------------
# layout family parameters

@dataclass(frozen=True)
class Checkerboard:
    """Blocks on the odd-odd sub-lattice of an L x L grid (L even)."""

    side: int


@dataclass(frozen=True)
class Linear:
    """Single open strip: a 1 x 2N row alternating block and aisle."""

    n_blocks: int


@dataclass(frozen=True)
class DoubleRow:
    """Two parallel block rows separated by a central aisle (width in cells)."""

    per_row: int
    aisle_width: int = 3


@dataclass(frozen=True)
class Comb:
    """Linear spine with perpendicular teeth every `pitch` block-widths."""

    spine: int
    tooth: int
    pitch: int


@dataclass(frozen=True)
class HollowRect:
    """One-block-thick rectangular ring; the interior is a safety zone."""

    outer_w: int
    outer_h: int


@dataclass(frozen=True)
class Zigzag:
    """Serpentine strip: `segments` rows of `segment` blocks, `gap` block-widths
    apart, joined by connector blocks at alternating ends."""

    segment: int
    segments: int
    gap: int


FamilyParams = Union[Checkerboard, Linear, DoubleRow, Comb, HollowRect, Zigzag]


# ---------------------------------------------------------------------------
# generators

def build_checkerboard(side: int) -> Layout:
    """Checkerboard market: blocks at odd-odd cells of an even side x side grid.

    Yields (side/2)^2 blocks; interior blocks are surrounded by eight aisle
    cells.  Edge blocks border the exterior directly.
    """
    if side < 2 or side % 2 != 0:
        raise LayoutError(f"checkerboard side must be even and >= 2, got {side}")
    cells = np.zeros((side, side), dtype=np.uint8)
    cells[1::2, 1::2] = CellKind.BLOCK
    return Layout(side, side, cells, name=f"checkerboard-L{side}")


def build_linear(n_blocks: int) -> Layout:
    """Linear open-air strip: 1 x 2N cells, blocks at even columns."""
    if n_blocks < 1:
        raise LayoutError(f"linear layout needs at least one block, got {n_blocks}")
    cells = np.zeros((1, 2 * n_blocks), dtype=np.uint8)
    cells[0, ::2] = CellKind.BLOCK
    return Layout(1, 2 * n_blocks, cells, name=f"linear-N{n_blocks}")


def _layout_from_cells(cell_coords: list[tuple[int, int]], name: str) -> Layout:
    """Render block cells onto the minimal bounding grid, with validation."""
    seen = set()
    for rc in cell_coords:
        if rc in seen:
            raise LayoutError(f"variant parameters place two blocks at cell {rc}")
        seen.add(rc)
    rows = [r for r, _ in cell_coords]
    cols = [c for _, c in cell_coords]
    r0, c0 = min(rows), min(cols)
    height = max(rows) - r0 + 1
    width = max(cols) - c0 + 1
    cells = np.zeros((height, width), dtype=np.uint8)
    for r, c in cell_coords:
        cells[r - r0, c - c0] = CellKind.BLOCK
    # generated layouts keep every block aisle-separated from its neighbors
    if (cells[:, :-1] & cells[:, 1:]).any() or (cells[:-1, :] & cells[1:, :]).any():
        raise LayoutError("variant parameters place blocks edge-to-edge")
    return Layout(height, width, cells, name=name)


def build_variant(params: FamilyParams) -> Layout:
    """Construct one of the constant-egress layout variants.

    Placement rules (block-lattice coordinates; one unit = two cells):
      * DoubleRow: rows of `per_row` blocks at cell rows 0 and aisle_width+1.
      * Comb: spine blocks at (0, i); teeth of `tooth` blocks hang below the
        spine at columns 0, pitch, 2*pitch, ...
      * HollowRect: the perimeter sites of an outer_w x outer_h rectangle.
      * Zigzag: segment k occupies block-row k*gap; consecutive segments are
        joined by gap-1 connector blocks at alternating ends.
    """
    if isinstance(params, Checkerboard):
        return build_checkerboard(params.side)
    if isinstance(params, Linear):
        return build_linear(params.n_blocks)
    if isinstance(params, DoubleRow):
        n, w = params.per_row, params.aisle_width
        if n < 1 or w < 1:
            raise LayoutError(f"invalid double-row parameters {params}")
        coords = [(0, 2 * j) for j in range(n)]
        coords += [(w + 1, 2 * j) for j in range(n)]
        return _layout_from_cells(coords, f"double-row-{n}x2-a{w}")
    if isinstance(params, Comb):
        s, t, p = params.spine, params.tooth, params.pitch
        if s < 1 or t < 1 or p < 1:
            raise LayoutError(f"invalid comb parameters {params}")
        coords = [(0, 2 * i) for i in range(s)]
        for i in range(0, s, p):
            coords += [(2 * k, 2 * i) for k in range(1, t + 1)]
        return _layout_from_cells(coords, f"comb-s{s}-t{t}-p{p}")
    if isinstance(params, HollowRect):
        w, h = params.outer_w, params.outer_h
        if w < 2 or h < 2:
            raise LayoutError(f"hollow rectangle needs both sides >= 2, got {params}")
        coords = [
            (2 * i, 2 * j)
            for i in range(h)
            for j in range(w)
            if i in (0, h - 1) or j in (0, w - 1)
        ]
        return _layout_from_cells(coords, f"hollow-rect-{w}x{h}")
    if isinstance(params, Zigzag):
        s, c, g = params.segment, params.segments, params.gap
        if s < 1 or c < 1 or g < 1:
            raise LayoutError(f"invalid zigzag parameters {params}")
        coords = []
        for k in range(c):
            coords += [(2 * k * g, 2 * j) for j in range(s)]
            if k < c - 1:
                turn_col = 2 * (s - 1) if k % 2 == 0 else 0
                coords += [
                    (2 * (k * g + m), turn_col) for m in range(1, g)
                ]
        return _layout_from_cells(coords, f"zigzag-s{s}-c{c}-g{g}")
    raise LayoutError(f"unknown layout family parameters: {params!r}")


# ---------------------------------------------------------------------------
# site-plan text format: 'B' block, '.' aisle, newline-separated equal rows

def parse_site_plan(text: str, name: str = "") -> Layout:
    """Parse site-plan text into a Layout.

    Rows must be equal length over {B, .}; a single trailing newline is
    accepted.  Errors carry the offending line (and column for bad chars).
    """
    if text.endswith("\n"):
        text = text[:-1]
    if not text:
        raise SitePlanParseError("empty site plan", line=1)
    lines = text.split("\n")
    width = len(lines[0])
    grid = np.zeros((len(lines), width), dtype=np.uint8)
    for i, row in enumerate(lines):
        if len(row) != width:
            raise SitePlanParseError(
                f"ragged row: expected {width} columns, got {len(row)}", line=i + 1
            )
        for j, ch in enumerate(row):
            if ch == BLOCK_CHAR:
                grid[i, j] = CellKind.BLOCK
            elif ch != AISLE_CHAR:
                raise SitePlanParseError(
                    f"illegal character {ch!r}", line=i + 1, col=j + 1
                )
    if not (grid == CellKind.BLOCK).any():
        raise SitePlanParseError("site plan contains no blocks", line=1)
    return Layout(len(lines), width, grid, name=name)


def serialize_site_plan(layout: Layout) -> str:
    """Canonical site-plan text: 'B'/'.' rows, one trailing newline."""
    rows = (
        "".join(BLOCK_CHAR if v else AISLE_CHAR for v in row)
        for row in layout.cells
    )
    return "\n".join(rows) + "\n"
