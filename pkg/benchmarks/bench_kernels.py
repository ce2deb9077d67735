#!/usr/bin/env python3
"""Compare the numba and numpy kernel backends on the workloads that dominate runtime.

    python benchmarks/bench_kernels.py [--repeat 3]

numba timings exclude the first (compiling or cache-loading) call.
"""

from __future__ import annotations

import argparse
import statistics
import time

from qmagic import kernels
from qmagic.extremal import search_min_max_degree, verify_theorem_exhaustive, verify_theorem_sampled
from qmagic.qmatrix import verify_power_identity

WORKLOADS = {
    "exhaustive (3,3), 2.2M subsets": lambda: verify_theorem_exhaustive(3, 3),
    "exhaustive (5,2), 12.6k subsets": lambda: verify_theorem_exhaustive(5, 2),
    "sampled (3,4), 20k subsets": lambda: verify_theorem_sampled(3, 4, 20_000, 1),
    "power identity (3,6), dim 729": lambda: verify_power_identity(3, 6),
    "power identity (2,10), dim 1024": lambda: verify_power_identity(2, 10),
    "search (3,4) size 55, 5k iters": lambda: search_min_max_degree(3, 4, 55, 5000, 1),
}


def time_it(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    names = kernels.available_backends()
    results: dict[str, dict[str, float]] = {}
    for backend in names:
        with kernels.use_backend(backend):
            for label, fn in WORKLOADS.items():
                fn()  # warm-up / JIT
                results.setdefault(label, {})[backend] = time_it(fn, args.repeat)

    width = max(map(len, WORKLOADS))
    print(f"{'workload':<{width}}  " + "  ".join(f"{b:>10}" for b in names) + ("  speedup" if len(names) > 1 else ""))
    for label, row in results.items():
        line = f"{label:<{width}}  " + "  ".join(f"{row[b] * 1e3:>8.1f}ms" for b in names)
        if "numba" in row and "numpy" in row:
            line += f"  {row['numpy'] / row['numba']:>6.1f}x"
        print(line)


if __name__ == "__main__":
    main()
