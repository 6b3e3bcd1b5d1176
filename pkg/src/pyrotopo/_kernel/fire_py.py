"""Pure-numpy fire kernel (fallback backend).

Vectorizes one synchronous step at a time.  All randomness is keyed: the
word for any draw depends only on (stream key, step, block id, draw kind,
spark index), so the result is independent of iteration order and matches
the compiled kernel bit for bit.

Status codes: 0 intact, 1 burning, 2 burnt out.
"""

from __future__ import annotations

import numpy as np

from ..rng import C_BLOCK, C_SPARK, C_STEP, MASK64, PH_BURNOUT, PH_SPARK, UNIT, mix64, mix64_vec

_C_BLOCK = np.uint64(C_BLOCK)
_C_SPARK = np.uint64(C_SPARK)
_PH_BURNOUT = np.uint64(PH_BURNOUT)
_PH_SPARK = np.uint64(PH_SPARK)
_S11 = np.uint64(11)

INTACT = 0
BURNING = 1
BURNT_OUT = 2


def run_fire(
    brow: np.ndarray,
    bcol: np.ndarray,
    grid: np.ndarray,
    ignition: int,
    dist: np.ndarray,
    threshold: float,
    gamma: float,
    r: int,
    sparks: int,
    max_steps: int,
    key: int,
    stop_on_percolation: bool = False,
):
    """Run one fire realization; returns (ever uint8[N], duration, percolated).

    `brow`/`bcol` are block-lattice coordinates per block id, `grid` maps a
    lattice cell to a block id (-1 empty), `dist` is the Chebyshev distance
    of each block from the ignition, `threshold` the percolation distance
    (+inf when percolation is impossible).
    """
    n = brow.shape[0]
    h, w = grid.shape
    status = np.zeros(n, np.uint8)
    status[ignition] = BURNING
    burning = np.array([ignition], np.int64)
    percolated = bool(dist[ignition] >= threshold)

    side = 2 * r + 1
    n_off = np.uint64(side * side - 1)
    center = np.uint64(2 * r * (r + 1))
    side_u = np.uint64(side)
    spark_salts = np.arange(sparks, dtype=np.uint64) * _C_SPARK

    duration = 0
    for t in range(max_steps):
        if burning.size == 0:
            break
        duration = t + 1
        s_t = np.uint64(mix64(key ^ ((t * C_STEP) & MASK64)))

        # Burnout gate: a burning block must survive the gamma draw to act
        # this step; failures burn out without emitting.
        b_u = burning.astype(np.uint64)
        words = mix64_vec(s_t ^ (b_u * _C_BLOCK) ^ _PH_BURNOUT)
        alive = (words >> _S11).astype(np.float64) * UNIT < gamma
        status[burning[~alive]] = BURNT_OUT
        survivors = burning[alive]

        # Dispersal: each survivor emits `sparks` sparks, landing uniformly
        # on the (2r+1)^2 - 1 nonzero Chebyshev offsets in lattice coords.
        pending = np.empty(0, np.int64)
        if survivors.size and sparks:
            hbase = mix64_vec(
                s_t ^ (survivors.astype(np.uint64) * _C_BLOCK) ^ _PH_SPARK
            )
            words = mix64_vec(hbase[:, None] ^ spark_salts[None, :])
            k = words % n_off
            k += (k >= center)  # skip the zero offset
            dr = (k // side_u).astype(np.int64) - r
            dc = (k % side_u).astype(np.int64) - r
            pr = (brow[survivors, None] + dr).ravel()
            pc = (bcol[survivors, None] + dc).ravel()
            inside = (pr >= 0) & (pr < h) & (pc >= 0) & (pc < w)
            ids = grid[pr[inside], pc[inside]].astype(np.int64)
            ids = ids[ids >= 0]
            pending = np.unique(ids[status[ids] == INTACT])

        if pending.size:
            status[pending] = BURNING
            if dist[pending].max() >= threshold:
                percolated = True
        burning = np.concatenate((survivors, pending))
        if stop_on_percolation and percolated:
            break

    ever = (status != INTACT).astype(np.uint8)
    return ever, duration, percolated
