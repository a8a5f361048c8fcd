"""Time the compiled kernels against the numpy reference versions.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]
"""
from __future__ import annotations

import argparse
import random
import time

import numpy as np

from zdmult.kernels import available_backends


def _cases(rng: random.Random) -> dict:
    A = np.array(sorted({(rng.randint(-400, 400), rng.randint(-400, 400)) for _ in range(3000)}), dtype=np.int64)
    shifts = np.array([(a, b) for a in range(-20, 21) for b in range(-20, 21)], dtype=np.int64)
    F = np.array([(a, b) for a in range(-30, 31) for b in range(-30, 31)], dtype=np.int64)
    mats = np.array([[[a, -b], [b, a]] for a in range(-5, 6) for b in range(-5, 6)], dtype=np.int64)
    pts = np.array([(rng.randint(-400, 400), rng.randint(-400, 400)) for _ in range(20000)], dtype=np.int64)
    return {
        "v2_pair_sweep": (-(2 ** 10), 2 ** 10),
        "member_mask": (pts, A),
        "dilate_counts": (mats, shifts, A),
        "shift_counts": (F, shifts, A),
        "images_distinct": (mats, np.array([7, 3], dtype=np.int64)),
    }


def _time(fn, args, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()
    cases = _cases(random.Random(args.seed))
    backends = available_backends()
    if "cython" not in backends:
        print("compiled extension not built; only the reference backend is timed")
    print(f"{'kernel':<18}" + "".join(f"{name:>12}" for name in backends) + ("     speedup" if len(backends) > 1 else ""))
    for kernel in ("v2_pair_sweep", "member_mask", "dilate_counts", "shift_counts", "images_distinct"):
        a = cases[kernel]
        times = {}
        results = {}
        for name, mod in backends.items():
            times[name] = _time(getattr(mod, kernel), a, args.repeat)
            r = getattr(mod, kernel)(*a)
            results[name] = np.asarray(r).tolist()
        same = len({repr(v) for v in results.values()}) == 1
        row = f"{kernel:<18}" + "".join(f"{times[n] * 1e3:>10.2f}ms" for n in backends)
        if "cython" in times:
            row += f"  {times['python'] / times['cython']:>9.1f}x"
        if not same:
            row += "  RESULTS DIFFER"
        print(row)


if __name__ == "__main__":
    main()
