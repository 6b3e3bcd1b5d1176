"""Benchmark the fire-simulation kernels against each other.

Runs the same replicate set through every available backend (compiled and
pure-numpy), checks the outputs are bit-identical, and reports wall time
per backend plus the speedup.  Usage:

    python3 benchmarks/bench_fire.py --side 20 --replicates 400
"""

import argparse
import time

import numpy as np

from pyrotopo import _kernel
from pyrotopo.layout import build_checkerboard
from pyrotopo.propagation import (
    central_ignition,
    _block_lattice,
    _distances_and_threshold,
    _ignition_id,
)
from pyrotopo.rng import fold_seed, substream


def bench(args):
    layout = build_checkerboard(args.side)
    lattice = _block_lattice(layout)
    ign_id = _ignition_id(layout, central_ignition(layout))
    dist, threshold = _distances_and_threshold(lattice, ign_id, 0.5)
    keys = [substream(fold_seed(args.seed), i) for i in range(args.replicates)]
    gammas = np.linspace(0.1, 0.9, args.replicates)

    backends = _kernel.available_backends()
    results = {}
    timings = {}
    for name, run_fire in backends.items():
        start = time.perf_counter()
        out = [
            run_fire(
                lattice.brow, lattice.bcol, lattice.grid, ign_id, dist,
                threshold, float(g), args.r, 1, args.max_steps, k, False,
            )
            for g, k in zip(gammas, keys)
        ]
        timings[name] = time.perf_counter() - start
        results[name] = out

    names = list(backends)
    for other in names[1:]:
        for (ev_a, d_a, p_a), (ev_b, d_b, p_b) in zip(results[names[0]], results[other]):
            assert np.array_equal(np.asarray(ev_a), np.asarray(ev_b))
            assert d_a == d_b and p_a == p_b
    print(f"layout checkerboard-L{args.side} ({layout.n_blocks} blocks), "
          f"{args.replicates} replicates, r={args.r}, max_steps={args.max_steps}")
    for name in names:
        print(f"  {name:<8} {timings[name]:8.3f} s")
    if len(names) > 1:
        base = timings.get("python")
        fast = timings.get("cython")
        if base and fast:
            print(f"  speedup  {base / fast:8.1f} x (outputs bit-identical)")
    else:
        print("  (only one backend available; nothing to compare)")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--side", type=int, default=20)
    parser.add_argument("--replicates", type=int, default=400)
    parser.add_argument("--r", type=int, default=3)
    parser.add_argument("--max-steps", type=int, default=500)
    parser.add_argument("--seed", type=int, default=0)
    bench(parser.parse_args())


if __name__ == "__main__":
    main()
