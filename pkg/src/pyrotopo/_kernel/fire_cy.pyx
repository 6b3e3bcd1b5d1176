# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled fire kernel.

Scalar rewrite of the numpy fallback with the identical keyed-counter draw
scheme; returns bit-identical (ever, duration, percolated) for any input.
The step loop runs without the GIL so replicate threads overlap.

Status codes: 0 intact, 1 burning, 2 burnt out, 3 ignited this step.
"""

import numpy as np

from libc.stdint cimport int32_t, int64_t, uint8_t, uint64_t

cdef uint64_t M1 = <uint64_t>0xBF58476D1CE4E5B9
cdef uint64_t M2 = <uint64_t>0x94D049BB133111EB
cdef uint64_t C_STEP = <uint64_t>0xD1B54A32D192ED03
cdef uint64_t C_BLOCK = <uint64_t>0x8CB92BA72F3D8DD7
cdef uint64_t C_SPARK = <uint64_t>0x2545F4914F6CDD1D
cdef uint64_t PH_BURNOUT = <uint64_t>0x243F6A8885A308D3
cdef uint64_t PH_SPARK = <uint64_t>0x13198A2E03707344

cdef double UNIT = 1.0 / 9007199254740992.0  # 2**-53


cdef inline uint64_t mix64(uint64_t z) nogil:
    z = (z ^ (z >> 30)) * M1
    z = (z ^ (z >> 27)) * M2
    return z ^ (z >> 31)


cdef inline double unit01(uint64_t u) nogil:
    return <double>(u >> 11) * UNIT


def run_fire(
    int64_t[::1] brow,
    int64_t[::1] bcol,
    int32_t[:, ::1] grid,
    Py_ssize_t ignition,
    double[::1] dist,
    double threshold,
    double gamma,
    int r,
    int sparks,
    int max_steps,
    uint64_t key,
    bint stop_on_percolation=False,
):
    """See fire_py.run_fire; same contract, compiled."""
    cdef Py_ssize_t n = brow.shape[0]
    cdef Py_ssize_t h = grid.shape[0]
    cdef Py_ssize_t w = grid.shape[1]

    ever_arr = np.zeros(n, dtype=np.uint8)
    status_arr = np.zeros(n, dtype=np.uint8)
    burn_arr = np.empty(n, dtype=np.int64)
    next_arr = np.empty(n, dtype=np.int64)

    cdef uint8_t[::1] ever = ever_arr
    cdef uint8_t[::1] status = status_arr
    cdef int64_t[::1] burning = burn_arr
    cdef int64_t[::1] nxt = next_arr

    cdef uint64_t side = <uint64_t>(2 * r + 1)
    cdef uint64_t n_off = side * side - 1
    cdef uint64_t center = <uint64_t>(2 * r * (r + 1))

    cdef Py_ssize_t n_burning = 1
    cdef Py_ssize_t n_next, i, b, tid
    cdef int64_t pr, pc, t = 0
    cdef uint64_t s_t, word, hbase, k
    cdef int j
    cdef bint percolated

    status[ignition] = 1
    ever[ignition] = 1
    burning[0] = ignition
    percolated = dist[ignition] >= threshold

    with nogil:
        while t < max_steps and n_burning > 0:
            s_t = mix64(key ^ (<uint64_t>t * C_STEP))
            n_next = 0
            for i in range(n_burning):
                b = burning[i]
                word = mix64(s_t ^ (<uint64_t>b * C_BLOCK) ^ PH_BURNOUT)
                if unit01(word) >= gamma:
                    status[b] = 2
                    continue
                nxt[n_next] = b
                n_next += 1
                if sparks == 0:
                    continue
                hbase = mix64(s_t ^ (<uint64_t>b * C_BLOCK) ^ PH_SPARK)
                for j in range(sparks):
                    word = mix64(hbase ^ (<uint64_t>j * C_SPARK))
                    k = word % n_off
                    if k >= center:
                        k += 1
                    pr = brow[b] + <int64_t>(k // side) - r
                    pc = bcol[b] + <int64_t>(k % side) - r
                    if 0 <= pr < h and 0 <= pc < w:
                        tid = grid[pr, pc]
                        if tid >= 0 and status[tid] == 0:
                            status[tid] = 3
                            if dist[tid] >= threshold:
                                percolated = True
            # collect this step's ignitions (status 3) into the front
            for b in range(n):
                if status[b] == 3:
                    status[b] = 1
                    ever[b] = 1
                    nxt[n_next] = b
                    n_next += 1
            for i in range(n_next):
                burning[i] = nxt[i]
            n_burning = n_next
            t += 1
            if stop_on_percolation and percolated:
                break

    return ever_arr, int(t), bool(percolated)
