"""Evacuation distance fields and the analytic egress formulas.

The egress measure of an aisle cell is its Manhattan distance to the
nearest exterior point, with boundary cells one step from safety: an
idealized proxy that assumes occupants head straight for the closest
edge, so interposed blocks do not lengthen it.  Cells with no aisle path
to the boundary at all (enclosed courtyards) are unreachable and excluded
from averages.  In this unit the linear strip has expected egress exactly
1 and the checkerboard follows L/6 - 1/2 + 1/(3L) up to a constant
lattice offset of +1 (boundary cells count 1, the continuum formula
counts them 0).
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .layout import CellKind, Layout


class EgressDomainError(ValueError):
    """Layout or parameters outside an operation's domain."""


@dataclass
class DistanceField:
    """Per-cell distance to the exterior.

    `distance` is NaN on block cells, +inf on aisle cells with no aisle
    path to the boundary, and the Manhattan distance to the nearest
    exterior point (>= 1) elsewhere.
    """

    distance: np.ndarray

    @property
    def aisle_values(self) -> np.ndarray:
        return self.distance[~np.isnan(self.distance)]

    @property
    def reachable_values(self) -> np.ndarray:
        vals = self.aisle_values
        return vals[np.isfinite(vals)]

    @property
    def unreachable_count(self) -> int:
        return int(np.isposinf(self.distance).sum())


@dataclass
class EgressStats:
    mean: float
    max: int
    histogram: list[tuple[int, int]]  # (distance, count), ascending
    aisle_cells: int  # reachable aisle cells included in the mean
    unreachable_cells: int = 0

    def as_dict(self) -> dict:
        return {
            "mean": self.mean,
            "max": self.max,
            "aisle_cells": self.aisle_cells,
            "histogram": [{"d": d, "count": c} for d, c in self.histogram],
        }


@dataclass(frozen=True)
class MortalityParams:
    """Exponential amplifier turning egress distance into a casualty weight.

    The growth rate and baseline are configuration, not measured constants;
    defaults keep the weight unclamped for checkerboards up to L = 40.
    """

    lam: float = 0.3
    p0: float = 1e-3

    def __post_init__(self):
        if self.lam < 0:
            raise EgressDomainError(f"lambda must be >= 0, got {self.lam}")
        if not (0 < self.p0 <= 1):
            raise EgressDomainError(f"p0 must be in (0, 1], got {self.p0}")


def distance_field(layout: Layout) -> DistanceField:
    """Manhattan distance to the exterior for every reachable aisle cell.

    Reachability is decided by a multi-source BFS over 4-connected aisle
    cells seeded at the boundary: a cell walled off from the exterior is
    unreachable (+inf) no matter how close to the edge it sits.  Reachable
    cells get min(row, col, height-1-row, width-1-col) + 1 — the straight
    Manhattan count to the closest edge, with every boundary cell one step
    from safety.
    """
    h, w = layout.height, layout.width
    cells = layout.cells

    reachable = np.zeros((h, w), dtype=bool)
    queue: deque[tuple[int, int]] = deque()
    for r in range(h):
        for c in (0, w - 1):
            if cells[r, c] == CellKind.AISLE and not reachable[r, c]:
                reachable[r, c] = True
                queue.append((r, c))
    for c in range(w):
        for r in (0, h - 1):
            if cells[r, c] == CellKind.AISLE and not reachable[r, c]:
                reachable[r, c] = True
                queue.append((r, c))
    while queue:
        r, c = queue.popleft()
        for nr, nc in ((r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)):
            if (
                0 <= nr < h
                and 0 <= nc < w
                and cells[nr, nc] == CellKind.AISLE
                and not reachable[nr, nc]
            ):
                reachable[nr, nc] = True
                queue.append((nr, nc))

    rows, cols = np.indices((h, w))
    edge = np.minimum.reduce([rows, cols, h - 1 - rows, w - 1 - cols]) + 1.0
    dist = np.where(reachable, edge, np.inf)
    dist[cells == CellKind.BLOCK] = np.nan
    return DistanceField(dist)


def expected_egress(layout: Layout, field: DistanceField | None = None) -> EgressStats:
    """Uniform average egress distance over reachable aisle cells.

    Aisle cells fully enclosed by blocks are excluded from the mean and
    reported via `unreachable_cells`.
    """
    if field is None:
        field = distance_field(layout)
    vals = field.reachable_values
    if vals.size == 0:
        raise EgressDomainError("layout has no aisle cell that reaches the exterior")
    ivals = vals.astype(np.int64)
    counts = np.bincount(ivals)
    hist = [(int(d), int(n)) for d, n in enumerate(counts) if n > 0]
    return EgressStats(
        mean=float(vals.mean()),
        max=int(ivals.max()),
        histogram=hist,
        aisle_cells=int(vals.size),
        unreachable_cells=field.unreachable_count,
    )


def _require_even_side(side: int):
    if not isinstance(side, (int, np.integer)) or side < 2 or side % 2 != 0:
        raise EgressDomainError(f"side length must be an even integer >= 2, got {side}")


def analytic_tail(side: int, k: int) -> float:
    """Tail probability that a random interior point sits at least k units deep.

    Equals ((L-2k)/L)^2 for k = 0..L/2-1 and 0 at k = L/2.
    """
    _require_even_side(side)
    if not 0 <= k <= side // 2:
        raise EgressDomainError(f"k must be in [0, {side // 2}], got {k}")
    if k == side // 2:
        return 0.0
    return ((side - 2 * k) / side) ** 2


def analytic_expected(side: float, mode: str = "exact") -> float:
    """Closed-form expected egress distance for the checkerboard.

    exact mode (even integer side): L/6 - 1/2 + 1/(3L), the full tail sum.
    asymptotic mode (any real side >= 2): L/6, the large-N growth law.
    """
    if mode == "exact":
        _require_even_side(side)
        return side / 6 - 0.5 + 1 / (3 * side)
    if mode == "asymptotic":
        if side < 2:
            raise EgressDomainError(f"side length must be >= 2, got {side}")
        return side / 6
    raise EgressDomainError(f"mode must be 'exact' or 'asymptotic', got {mode!r}")


def mortality_weight(d: float, params: MortalityParams = MortalityParams()) -> float:
    """Clamped exponential casualty weight min(1, p0 * exp(lambda * d))."""
    if d < 0:
        raise EgressDomainError(f"distance must be >= 0, got {d}")
    return min(1.0, params.p0 * math.exp(params.lam * d))


def mortality_mean(layout: Layout, params: MortalityParams = MortalityParams()) -> float:
    """Mean casualty weight over reachable aisle cells."""
    vals = distance_field(layout).reachable_values
    if vals.size == 0:
        raise EgressDomainError("layout has no aisle cell that reaches the exterior")
    return float(np.minimum(1.0, params.p0 * np.exp(params.lam * vals)).mean())


def mortality_ratio(
    a: Layout, b: Layout, params: MortalityParams = MortalityParams()
) -> float:
    """Ratio of mean casualty weights of two layouts.

    With lambda > 0 and no clamping this exceeds the plain distance ratio
    whenever layout `a` has the longer expected egress.
    """
    return mortality_mean(a, params) / mortality_mean(b, params)
