"""Compare the compiled and pure-Python kernels.

    python benchmarks/bench_kernels.py [--samples N] [--multistarts N] [--repeat R]
"""

import argparse
import time

import numpy as np

from toeplitz_lab import _backend
from toeplitz_lab.caratheodory import random_params


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=200_000)
    ap.add_argument("--multistarts", type=int, default=200)
    ap.add_argument("--k", type=int, default=3)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(0)
    batch = random_params(rng, 3, args.samples)
    starts = random_params(np.random.default_rng(1), 3, args.multistarts)
    names = _backend.available()
    print(f"backends: {', '.join(names)}")
    results = {}
    for name in names:
        kern = _backend.load(name)
        row = {}
        for code, label in ((0, "t22"), (1, "t31"), (2, "fs")):
            row[f"batch_{label}"] = best_of(lambda: kern.batch_objective(batch, args.k, code, 0.5), args.repeat)
        row["multistart_t31"] = best_of(lambda: kern.multistart(starts, args.k, 1, 0j), args.repeat)
        results[name] = row

    cols = list(next(iter(results.values())))
    print(f"{'kernel':<16}" + "".join(f"{n:>12}" for n in names) + ("     speedup" if len(names) > 1 else ""))
    for c in cols:
        line = f"{c:<16}" + "".join(f"{results[n][c]:>11.4f}s" for n in names)
        if len(names) > 1:
            line += f"{results['python'][c] / results['cython'][c]:>11.1f}x"
        print(line)


if __name__ == "__main__":
    main()
