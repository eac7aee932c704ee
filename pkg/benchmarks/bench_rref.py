"""Compare the numba and pure-numpy modular row reduction kernels.

    python3 benchmarks/bench_rref.py [--sizes 50 100 200] [--repeat 3]

Also times one end-to-end workload (two-term enumeration for preprojective D4)
under each backend.
"""
import argparse
import time

import numpy as np

from siltkit import _accel
from siltkit.linalg import DEFAULT_PRIME


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def bench_kernel(sizes, repeat, p=DEFAULT_PRIME):
    rng = np.random.default_rng(0)
    _accel.use_numba(True)
    _accel.rref_inplace(rng.integers(0, p, size=(4, 4)), p)  # compile outside the timing
    print(f"{'shape':>12} {'density':>8} {'numba [s]':>11} {'numpy [s]':>11} {'speedup':>8}")
    for n in sizes:
        for density in (1.0, 0.1):
            M = rng.integers(0, p, size=(n, 2 * n)) * (rng.random((n, 2 * n)) < density)
            times = {}
            results = {}
            for flag in (True, False):
                _accel.use_numba(flag)

                def run():
                    W = M.copy()
                    results[flag] = (_accel.rref_inplace(W, p), W)

                times[flag] = _time(run, repeat)
            (r1, p1), W1 = results[True]
            (r2, p2), W2 = results[False]
            assert r1 == r2 and np.array_equal(p1, p2) and np.array_equal(W1, W2)
            print(f"{n:>5}x{2 * n:<6} {density:>8.1f} {times[True]:>11.4f} {times[False]:>11.4f} "
                  f"{times[False] / times[True]:>8.1f}")
    _accel.use_numba(True)


def bench_workload(repeat):
    from siltkit.constructions import build_preprojective
    from siltkit.mutation import enumerate_two_term

    A = build_preprojective("D", 4)
    for flag in (True, False):
        _accel.use_numba(flag)
        t = _time(lambda: enumerate_two_term(A), repeat)
        print(f"enumerate_two_term(D4) with {'numba' if flag else 'numpy'}: {t:.3f} s")
    _accel.use_numba(True)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[20, 50, 100, 200])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--skip-workload", action="store_true")
    args = ap.parse_args()
    bench_kernel(args.sizes, args.repeat)
    if not args.skip_workload:
        bench_workload(1)


if __name__ == "__main__":
    main()
