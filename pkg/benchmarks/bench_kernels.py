"""Compare the numba-jitted kernels against the pure-numpy fallback.

Run directly:  python benchmarks/bench_kernels.py
Force the fallback everywhere with FEEDERSIM_NO_NUMBA=1 to feel the
end-to-end difference via `feedersim run`.
"""
import time

import numpy as np

from feedersim import kernels


def bench(label, fn, *args, repeat=5):
    fn(*args)  # warm up / compile
    best = min(_timed(fn, args) for _ in range(repeat))
    print(f"  {label:18s} {best * 1e3:9.3f} ms")
    return best


def _timed(fn, args):
    t0 = time.perf_counter()
    fn(*args)
    return time.perf_counter() - t0


def bench_nearest(rng):
    print("nearest_indices (3000 queries x 500 candidates):")
    px, py = rng.uniform(0, 15, 3000), rng.uniform(0, 8, 3000)
    cx, cy = rng.uniform(0, 15, 500), rng.uniform(0, 8, 500)
    j = bench("numba", kernels._nearest_jit, px, py, cx, cy)
    n = bench("numpy", kernels._nearest_numpy, px, py, cx, cy)
    print(f"  speedup x{n / j:.1f}")


def bench_scans(rng):
    n_drivers, n = 2000, 4000
    drv = np.sort(rng.integers(0, n_drivers, n)).astype(np.int64)
    lo = rng.integers(0, 3, n).astype(np.int64)
    hi = np.minimum(lo + rng.integers(1, 3, n), 3).astype(np.int64)
    bad = hi <= lo
    hi[bad] = lo[bad] + 1
    bx, by = rng.uniform(0, 15, n), rng.uniform(0, 8, n)
    dep = rng.uniform(0, 180, n)
    arr = dep + rng.uniform(1, 30, n)
    occ = rng.integers(0, 5, (n_drivers, 3)).astype(np.int32)

    print(f"fm scan ({n} candidate triples), 1000 queries:")

    def many(fn, *extra):
        for q in range(1000):
            fn(float(q % 15), 4.0, float(q % 60), 16.0, bx, by, dep, arr,
               drv, lo, hi, occ, 4)

    j = bench("numba", many, kernels._fm_best_jit)
    p = bench("numpy", many, kernels._fm_best_numpy)
    print(f"  speedup x{p / j:.1f}")


if __name__ == "__main__":
    rng = np.random.default_rng(0)
    bench_nearest(rng)
    bench_scans(rng)
