"""Time the compiled and numpy Monte-Carlo kernels on the same sampled blocks.

Usage::

    python3 benchmarks/bench_kernels.py [--trials 20000] [--m 4] [--repeat 3]

Sampling is done once up front so only the per-trial rate kernel is timed.
"""
import argparse
import time

import numpy as np

from pilotreuse import kernels
from pilotreuse.channel import BLOCK_TRIALS, ChannelParams, block_rng, sample_block
from pilotreuse.lattice import CellGrid


def bench(kernel, blocks, grid, params, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        start = time.perf_counter()
        out = [kernel(h, i, c, grid.period, grid.period_inv, params.gamma, params.power_control)
               for h, i, c in blocks]
        best = min(best, time.perf_counter() - start)
    return best, np.concatenate(out)


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--trials", type=int, default=20_000)
    p.add_argument("--m", type=int, default=4, help="torus order, L = 3^m")
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args(argv)

    grid = CellGrid(args.m)
    params = ChannelParams(3.7, args.trials, 1)
    backends = ["python"] + (["cython"] if kernels.BACKEND == "cython" else [])
    print(f"L={grid.L} trials/depth={args.trials} best of {args.repeat}")
    print(f"{'depth':>5} {'interferers':>11} " + " ".join(f"{b + ' s':>10}" for b in backends)
          + (f" {'speedup':>8} {'max rel diff':>13}" if len(backends) == 2 else ""))
    for depth in range(args.m):
        centers = grid.group_offsets(depth)
        blocks = []
        for b in range(-(-args.trials // BLOCK_TRIALS)):
            n = min(BLOCK_TRIALS, args.trials - b * BLOCK_TRIALS)
            home, interf = sample_block(grid, depth, n, block_rng(params.seed, depth, b))
            blocks.append((home, interf, centers))
        res = {b: bench(kernels.get_kernel(b), blocks, grid, params, args.repeat) for b in backends}
        line = f"{depth:>5} {len(centers):>11} " + " ".join(f"{res[b][0]:>10.4f}" for b in backends)
        if len(backends) == 2:
            (tp, rp), (tc, rc) = res["python"], res["cython"]
            diff = float(np.max(np.abs(rp - rc) / np.abs(rp)))
            line += f" {tp / tc:>8.1f} {diff:>13.2e}"
        print(line)


if __name__ == "__main__":
    main()
