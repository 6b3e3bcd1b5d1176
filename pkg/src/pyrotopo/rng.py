"""Counter-based random streams for reproducible simulation.

Every random decision in the fire model is a pure function of
(stream key, step, block, draw kind, spark index), computed with a
splitmix64-style finalizer.  There is no sequential generator state, so
results are independent of evaluation order, thread count, and backend
(the Cython kernel implements the identical integer arithmetic).
"""

from __future__ import annotations

import numpy as np

MASK64 = 0xFFFFFFFFFFFFFFFF

# splitmix64 finalizer multipliers plus fixed salts for the draw kinds.
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
C_GOLD = 0x9E3779B97F4A7C15
C_STEP = 0xD1B54A32D192ED03
C_BLOCK = 0x8CB92BA72F3D8DD7
C_SPARK = 0x2545F4914F6CDD1D
PH_BURNOUT = 0x243F6A8885A308D3
PH_SPARK = 0x13198A2E03707344

#: 1 / 2**53, for mapping the top 53 bits of a word to [0, 1).
UNIT = 2.0 ** -53


def mix64(z: int) -> int:
    """splitmix64 finalizer on a 64-bit word (scalar)."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def fold_seed(seed: int) -> int:
    """Normalize an arbitrary Python int seed into a 64-bit stream key."""
    return mix64(seed & MASK64)


def substream(key: int, index: int) -> int:
    """Derive an independent child stream key (replicates, bisection probes)."""
    return mix64(key ^ ((index * C_GOLD) & MASK64))


def unit_from_word(u: int) -> float:
    """Map a 64-bit word to a double in [0, 1)."""
    return (u >> 11) * UNIT


# -- numpy vector versions (uint64 wraparound arithmetic, identical results) --

_M1_U = np.uint64(_M1)
_M2_U = np.uint64(_M2)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)


def mix64_vec(z: np.ndarray) -> np.ndarray:
    """splitmix64 finalizer over a uint64 array."""
    z = (z ^ (z >> _S30)) * _M1_U
    z = (z ^ (z >> _S27)) * _M2_U
    return z ^ (z >> _S31)


def unit_from_word_vec(u: np.ndarray) -> np.ndarray:
    return (u >> _S11).astype(np.float64) * UNIT
