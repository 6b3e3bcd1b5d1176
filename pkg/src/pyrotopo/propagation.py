"""Contact-process fire spread on the block lattice.

Blocks occupy sites of a coarse lattice (cell coordinates halved: one
block-width = two grid cells).  Each synchronous step has two sub-phases:

1. survival gate — every burning block draws against gamma; a block must
   survive to act this step, otherwise it burns out without emitting;
2. ballistic dispersal — each surviving block emits `sparks_per_step`
   sparks, landing uniformly on the (2r+1)^2 - 1 nonzero offsets of the
   Chebyshev disc of radius r.  A spark landing on an intact block ignites
   it at the end of the step; sparks landing anywhere else (aisle gaps,
   exterior, already-burning or burnt-out sites) are lost.

The gate-then-emit order is what makes gamma the probability of sustaining
combustion for one more step: at gamma = 0 an ignition dies without
spreading, and the percolation probability rises monotonically to the
gamma = 1 plateau, which is what gives the critical-gamma bisection a
bracket.

All draws are keyed counters (see `rng`), so a simulation is a pure
function of (layout, params, ignition, seed) on every backend and thread
count.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from enum import IntEnum

import numpy as np

from . import _kernel
from .layout import BlockSite, Layout
from .rng import (
    C_BLOCK,
    C_SPARK,
    C_STEP,
    MASK64,
    PH_BURNOUT,
    PH_SPARK,
    fold_seed,
    mix64,
    substream,
    unit_from_word,
)


class PropagationError(ValueError):
    """Invalid fire parameters, ignition, or degenerate block lattice."""


class BlockStatus(IntEnum):
    INTACT = 0
    BURNING = 1
    BURNT_OUT = 2


@dataclass(frozen=True)
class FireParams:
    """Model parameters; gamma is per-step survival, r the dispersal radius."""

    gamma: float = 0.5
    r: int = 3
    sparks_per_step: int = 1
    max_steps: int = 500
    percolation_fraction: float = 0.5

    def __post_init__(self):
        if not 0.0 <= self.gamma <= 1.0:
            raise PropagationError(f"gamma must be in [0, 1], got {self.gamma}")
        if self.r < 1:
            raise PropagationError(f"dispersal radius must be >= 1, got {self.r}")
        if self.sparks_per_step < 0:
            raise PropagationError(
                f"sparks_per_step must be >= 0, got {self.sparks_per_step}"
            )
        if self.max_steps < 1:
            raise PropagationError(f"max_steps must be >= 1, got {self.max_steps}")
        if not 0.0 < self.percolation_fraction <= 1.0:
            raise PropagationError(
                f"percolation_fraction must be in (0, 1], got "
                f"{self.percolation_fraction}"
            )


@dataclass(frozen=True)
class FireStream:
    """Keyed random stream for a single fire realization."""

    key: int

    @classmethod
    def from_seed(cls, seed: int) -> "FireStream":
        return cls(fold_seed(seed))


@dataclass
class FireState:
    """Synchronous-step state: per-block status in block-id order.

    Block ids follow `Layout.block_positions()` (row-major cell order).
    """

    status: np.ndarray  # uint8, BlockStatus values
    step: int
    ignition_block: BlockSite

    def burning_ids(self) -> np.ndarray:
        return np.flatnonzero(self.status == BlockStatus.BURNING)

    @property
    def ever_burned(self) -> np.ndarray:
        return self.status != BlockStatus.INTACT


@dataclass
class FireOutcome:
    burned_fraction: float
    percolated: bool
    duration: int
    burn_map: np.ndarray  # bool per block id

    def as_dict(self) -> dict:
        return {
            "burned_fraction": self.burned_fraction,
            "percolated": self.percolated,
            "duration": self.duration,
        }


@dataclass
class SpreadEstimate:
    probability: float
    ci_halfwidth: float
    replicates: int

    def as_dict(self) -> dict:
        return {
            "probability": self.probability,
            "ci_halfwidth": self.ci_halfwidth,
            "replicates": self.replicates,
        }


@dataclass
class CriticalGammaEstimate:
    """Bisection result; `crossed` False means no crossing in [0, 1]."""

    gamma_c: float | None
    bracket_lo: float
    bracket_hi: float
    replicates_per_probe: int
    target_probability: float
    crossed: bool
    p_at_zero: float
    p_at_one: float
    probes: int

    def as_dict(self) -> dict:
        return {
            "gamma_c": self.gamma_c,
            "bracket_lo": self.bracket_lo,
            "bracket_hi": self.bracket_hi,
            "replicates_per_probe": self.replicates_per_probe,
            "target_probability": self.target_probability,
            "crossed": self.crossed,
            "p_at_zero": self.p_at_zero,
            "p_at_one": self.p_at_one,
            "probes": self.probes,
        }


# ---------------------------------------------------------------------------
# block-lattice geometry


def block_distance(a: BlockSite, b: BlockSite) -> int:
    """Chebyshev distance in block-widths (cell coordinates halved)."""
    (ar, ac), (br, bc) = a.block_coords, b.block_coords
    return max(abs(ar - br), abs(ac - bc))


def receptive_neighbors(layout: Layout, b: BlockSite, r: int) -> int:
    """Number of other blocks within Chebyshev block distance r of `b`."""
    if r < 1:
        raise PropagationError(f"radius must be >= 1, got {r}")
    pos = layout.block_positions()
    if not ((pos[:, 0] == b.row) & (pos[:, 1] == b.col)).any():
        raise PropagationError(f"{b} is not a block of the layout")
    lat = pos // 2
    d = np.maximum(
        np.abs(lat[:, 0] - b.row // 2), np.abs(lat[:, 1] - b.col // 2)
    )
    return int((d <= r).sum()) - 1  # exclude b itself


def central_ignition(layout: Layout) -> BlockSite:
    """The block nearest the centroid of all block positions (first on ties)."""
    pos = layout.block_positions()
    centroid = pos.mean(axis=0)
    i = int(np.argmin(((pos - centroid) ** 2).sum(axis=1)))
    return BlockSite(int(pos[i, 0]), int(pos[i, 1]))


@dataclass(frozen=True)
class _BlockLattice:
    brow: np.ndarray  # int64 lattice row per block id
    bcol: np.ndarray
    grid: np.ndarray  # int32 (H, W), block id or -1


def _block_lattice(layout: Layout) -> _BlockLattice:
    pos = layout.block_positions()
    lat = pos // 2
    lat = lat - lat.min(axis=0)
    h, w = lat.max(axis=0) + 1
    flat = lat[:, 0] * int(w) + lat[:, 1]
    if np.unique(flat).size != flat.size:
        raise PropagationError(
            "two blocks share a block-lattice site (cells closer than one "
            "block-width); the fire model requires one block per lattice site"
        )
    grid = np.full((int(h), int(w)), -1, dtype=np.int32)
    grid[lat[:, 0], lat[:, 1]] = np.arange(len(pos), dtype=np.int32)
    return _BlockLattice(
        np.ascontiguousarray(lat[:, 0], dtype=np.int64),
        np.ascontiguousarray(lat[:, 1], dtype=np.int64),
        np.ascontiguousarray(grid),
    )


def _ignition_id(layout: Layout, ignition: BlockSite) -> int:
    pos = layout.block_positions()
    hit = np.flatnonzero((pos[:, 0] == ignition.row) & (pos[:, 1] == ignition.col))
    if hit.size == 0:
        raise PropagationError(f"ignition {ignition} is not a block of the layout")
    return int(hit[0])


def _distances_and_threshold(
    lattice: _BlockLattice, ign_id: int, fraction: float
) -> tuple[np.ndarray, float]:
    """Chebyshev block distances from ignition, and the percolation cutoff.

    A lone block has no extent to cross, so the cutoff is +inf (never met).
    """
    dist = np.maximum(
        np.abs(lattice.brow - lattice.brow[ign_id]),
        np.abs(lattice.bcol - lattice.bcol[ign_id]),
    ).astype(np.float64)
    extent = float(dist.max())
    threshold = fraction * extent if extent > 0 else math.inf
    return dist, threshold


# ---------------------------------------------------------------------------
# dynamics


def initial_fire_state(layout: Layout, ignition: BlockSite) -> FireState:
    ign_id = _ignition_id(layout, ignition)
    status = np.zeros(layout.n_blocks, dtype=np.uint8)
    status[ign_id] = BlockStatus.BURNING
    return FireState(status=status, step=0, ignition_block=ignition)


def step_fire(
    state: FireState, layout: Layout, params: FireParams, stream: FireStream
) -> FireState:
    """One synchronous step (pure-Python reference implementation).

    Matches the simulation kernels draw for draw; `simulate_fire` is the
    fast path over the same dynamics.
    """
    lattice = _block_lattice(layout)
    h, w = lattice.grid.shape
    side = 2 * params.r + 1
    n_off = side * side - 1
    center = 2 * params.r * (params.r + 1)

    s_t = mix64(stream.key ^ ((state.step * C_STEP) & MASK64))
    status = state.status.copy()
    pending: set[int] = set()

    for b in np.flatnonzero(state.status == BlockStatus.BURNING):
        b = int(b)
        word = mix64(s_t ^ ((b * C_BLOCK) & MASK64) ^ PH_BURNOUT)
        if unit_from_word(word) >= params.gamma:
            status[b] = BlockStatus.BURNT_OUT
            continue
        hbase = mix64(s_t ^ ((b * C_BLOCK) & MASK64) ^ PH_SPARK)
        for j in range(params.sparks_per_step):
            word = mix64(hbase ^ ((j * C_SPARK) & MASK64))
            k = word % n_off
            if k >= center:
                k += 1
            pr = int(lattice.brow[b]) + k // side - params.r
            pc = int(lattice.bcol[b]) + k % side - params.r
            if 0 <= pr < h and 0 <= pc < w:
                tid = int(lattice.grid[pr, pc])
                if tid >= 0 and status[tid] == BlockStatus.INTACT:
                    pending.add(tid)

    for tid in pending:
        status[tid] = BlockStatus.BURNING
    return FireState(status=status, step=state.step + 1, ignition_block=state.ignition_block)


def simulate_fire(
    layout: Layout, params: FireParams, ignition: BlockSite, seed: int
) -> FireOutcome:
    """Run one realization to burnout or max_steps (deterministic per seed)."""
    lattice = _block_lattice(layout)
    ign_id = _ignition_id(layout, ignition)
    dist, threshold = _distances_and_threshold(
        lattice, ign_id, params.percolation_fraction
    )
    ever, duration, percolated = _kernel.run_fire(
        lattice.brow,
        lattice.bcol,
        lattice.grid,
        ign_id,
        dist,
        threshold,
        params.gamma,
        params.r,
        params.sparks_per_step,
        params.max_steps,
        fold_seed(seed),
        False,
    )
    burn_map = ever.astype(bool)
    return FireOutcome(
        burned_fraction=float(burn_map.mean()),
        percolated=bool(percolated),
        duration=int(duration),
        burn_map=burn_map,
    )


def burn_map_text(layout: Layout, outcome: FireOutcome) -> str:
    """Site-plan-shaped grid: 'X' burned block, 'B' intact block, '.' aisle."""
    chars = np.full((layout.height, layout.width), ".", dtype="<U1")
    pos = layout.block_positions()
    burned = outcome.burn_map
    chars[pos[:, 0], pos[:, 1]] = np.where(burned, "X", "B")
    return "\n".join("".join(row) for row in chars) + "\n"


def _resolve_threads(threads: int | None) -> int:
    if threads is not None:
        return max(1, int(threads))
    env = os.environ.get("PYROTOPO_THREADS", "").strip()
    if env:
        return max(1, int(env))
    return 1


def spread_probability(
    layout: Layout,
    params: FireParams,
    ignition: BlockSite,
    replicates: int,
    master_seed: int,
    threads: int | None = None,
) -> SpreadEstimate:
    """Monte Carlo percolation probability over derived replicate streams.

    Replicate i draws from substream(master, i); aggregation is a plain sum
    of flags, so the estimate is identical for any thread count or order.
    """
    if replicates < 1:
        raise PropagationError(f"replicates must be >= 1, got {replicates}")
    lattice = _block_lattice(layout)
    ign_id = _ignition_id(layout, ignition)
    dist, threshold = _distances_and_threshold(
        lattice, ign_id, params.percolation_fraction
    )
    key0 = fold_seed(master_seed)

    def one(i: int) -> bool:
        return _kernel.run_fire(
            lattice.brow,
            lattice.bcol,
            lattice.grid,
            ign_id,
            dist,
            threshold,
            params.gamma,
            params.r,
            params.sparks_per_step,
            params.max_steps,
            substream(key0, i),
            True,
        )[2]

    workers = _resolve_threads(threads)
    if workers == 1:
        hits = sum(one(i) for i in range(replicates))
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            hits = sum(pool.map(one, range(replicates)))

    p = hits / replicates
    ci = 1.96 * math.sqrt(p * (1.0 - p) / replicates)
    return SpreadEstimate(probability=p, ci_halfwidth=ci, replicates=replicates)


def estimate_critical_gamma(
    layout: Layout,
    params: FireParams,
    ignition: BlockSite,
    tolerance: float,
    replicates_per_probe: int,
    master_seed: int,
    target_probability: float = 0.5,
    threads: int | None = None,
) -> CriticalGammaEstimate:
    """Bisection for the gamma where percolation probability crosses target.

    `params.gamma` is ignored.  Endpoints are probed first: without
    p(0) < target < p(1) the result reports no crossing (`crossed=False`)
    instead of raising.  Probe k draws from substream(master, k), so the
    whole estimate is deterministic in the master seed.
    """
    if tolerance <= 0:
        raise PropagationError(f"tolerance must be > 0, got {tolerance}")
    if not 0.0 < target_probability < 1.0:
        raise PropagationError(
            f"target_probability must be in (0, 1), got {target_probability}"
        )
    key0 = fold_seed(master_seed)
    probes = 0

    def probe(gamma: float) -> float:
        nonlocal probes
        est = spread_probability(
            layout,
            replace(params, gamma=gamma),
            ignition,
            replicates_per_probe,
            master_seed=substream(key0, probes),
            threads=threads,
        )
        probes += 1
        return est.probability

    p_lo = probe(0.0)
    p_hi = probe(1.0)
    if not (p_lo < target_probability < p_hi):
        return CriticalGammaEstimate(
            gamma_c=None,
            bracket_lo=0.0,
            bracket_hi=1.0,
            replicates_per_probe=replicates_per_probe,
            target_probability=target_probability,
            crossed=False,
            p_at_zero=p_lo,
            p_at_one=p_hi,
            probes=probes,
        )

    lo, hi = 0.0, 1.0
    while hi - lo > tolerance:
        mid = 0.5 * (lo + hi)
        if probe(mid) >= target_probability:
            hi = mid
        else:
            lo = mid
    return CriticalGammaEstimate(
        gamma_c=0.5 * (lo + hi),
        bracket_lo=lo,
        bracket_hi=hi,
        replicates_per_probe=replicates_per_probe,
        target_probability=target_probability,
        crossed=True,
        p_at_zero=p_lo,
        p_at_one=p_hi,
        probes=probes,
    )
