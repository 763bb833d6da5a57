"""Time the compiled and pure-Python time-stepping backends on dense random data.

Usage: python3 benchmarks/bench_solve.py [--sizes 200 800 3200] [--repeat 3]
"""

import argparse
import time

import numpy as np

from wavefd import kernels
from wavefd.scheme import GridSpec, solve
from wavefd.seqspace import SupportSeq


def instance(n, rng):
    # n x n grid at Courant 0.5 with data filling the whole line
    dx = 1.0 / n
    grid = GridSpec(0.0, (n + 0.5) * dx, (n + 0.5) * 0.5 * dx, dx, 0.5 * dx)
    u0 = SupportSeq(rng.standard_normal(n + 1), 0)
    u1 = SupportSeq(rng.standard_normal(n + 1), 0)
    sh = [SupportSeq.zero()] + [SupportSeq(rng.standard_normal(n + 1), 0) for _ in range(grid.k_max)]
    return grid, u0, u1, sh


def best_time(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[200, 800, 3200])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    backends = sorted(kernels.BACKENDS)
    rng = np.random.default_rng(0)
    print(f"{'grid':>12} " + " ".join(f"{b:>12}" for b in backends) + f" {'speedup':>8}")
    for n in args.sizes:
        grid, u0, u1, sh = instance(n, rng)
        times = {b: best_time(lambda b=b: solve(grid, u0, u1, sh, backend=b), args.repeat) for b in backends}
        arrays = [solve(grid, u0, u1, sh, backend=b).array for b in backends]
        assert all(np.array_equal(arrays[0], a) for a in arrays[1:]), "backends disagree"
        speedup = times["python"] / times["compiled"] if "compiled" in times else float("nan")
        size = f"{grid.j_max + 1}x{grid.k_max + 1}"
        print(f"{size:>12} " + " ".join(f"{times[b]:>11.4f}s" for b in backends) + f" {speedup:>7.1f}x")


if __name__ == "__main__":
    main()
