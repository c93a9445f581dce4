"""Time the lattice kernels on both backends.

    python benchmarks/bench_kernels.py [--denom 12] [--repeat 3]

The first numba call of each kernel includes JIT compilation (or a cache
load), so it is reported separately from the steady-state best time.
"""

from __future__ import annotations

import argparse
import time
from fractions import Fraction

import numpy as np

from pfspace import kernels
from pfspace.lattice import compositions


def lattice(k: int, L: int) -> np.ndarray:
    return np.array(list(compositions(L, k)), dtype=np.int64)


def cases(denom: int):
    N3 = lattice(3, denom)
    N4 = lattice(4, denom)
    masks = kernels.all_masks(4)
    return [
        ("dominant_index k=4", lambda: kernels.dominant_index(N4, denom)),
        ("omega_half_mask k=4", lambda: kernels.omega_half_mask(N4, denom)),
        ("set_masses k=4", lambda: kernels.set_masses(N4, masks)),
        ("continuity_search k=3", lambda: kernels.continuity_search(N3, denom, Fraction(1, 3))),
        ("neighborhood_image k=4",
         lambda: kernels.neighborhood_image(N4, denom, 2 * denom // 3, 0b0001, Fraction(1, 3))),
    ], len(N3), len(N4)


def timed(fn, repeat: int):
    start = time.perf_counter()
    first_result = fn()
    first = time.perf_counter() - start
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return first, best, first_result


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--denom", type=int, default=36)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = ["numpy"] + (["numba"] if kernels.HAS_NUMBA else [])
    work, m3, m4 = cases(args.denom)
    print(f"lattice denominator {args.denom}: {m3} rows on 3 points, {m4} rows on 4 points")
    print(f"{'kernel':<26}" + "".join(f"{b + ' first':>14}{b + ' best':>14}" for b in backends)
          + f"{'speedup':>10}")
    for name, fn in work:
        row, results, bests = f"{name:<26}", [], []
        for b in backends:
            with kernels.use_backend(b):
                first, best, res = timed(fn, args.repeat)
            row += f"{first * 1e3:>12.2f}ms{best * 1e3:>12.2f}ms"
            results.append(repr(res))
            bests.append(best)
        if len(bests) == 2:
            row += f"{bests[0] / bests[1]:>9.1f}x"
        print(row)
        if len(set(results)) != 1:
            raise SystemExit(f"backends disagree on {name}")


if __name__ == "__main__":
    main()
