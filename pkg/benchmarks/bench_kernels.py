"""Compare the numba kernels with the numpy fallback on a Fibonacci-like word.

    python3 benchmarks/bench_kernels.py [--n 200000] [--L 200] [--repeat 5]

Prints best-of-repeat wall time per kernel and the speedup.  Both paths are
checked for identical output before timing.
"""
import argparse
import time

import numpy as np

from abclosure import kernels
from abclosure.generators import fibonacci


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=200_000)
    ap.add_argument("--L", type=int, default=200)
    ap.add_argument("--repeat", type=int, default=5)
    a = ap.parse_args()
    if not kernels.HAVE_NUMBA:
        raise SystemExit("numba unavailable (or ABCLOSURE_NO_NUMBA set); nothing to compare")

    w = fibonacci().prefix(a.n).astype(np.uint8)
    c = kernels.prefix_counts(w, 2)
    sa = kernels.suffix_array(w[: a.n // 10])
    heavy = np.array([int(np.floor(m * 0.382)) + 1 for m in range(a.L + 1)], dtype=np.int64)
    cases = {
        "prefix_counts": lambda k: k.prefix_counts(w, 2),
        "parikh_keys": lambda k: k.parikh_keys(c, a.L, a.L + 1),
        "corridor_profile": lambda k: k.corridor_profile(c, a.L),
        "prefix_function": lambda k: k.prefix_function(w),
        "lcp_array": lambda k: k.lcp_array(w[: a.n // 10], sa),
        "heavy_light_scan": lambda k: k.heavy_light_scan(w[: a.n // 10], 40, heavy, heavy),
    }
    kernels.warmup()
    print(f"word length {a.n}, L {a.L}, best of {a.repeat}")
    print(f"{'kernel':<18}{'numpy s':>10}{'numba s':>10}{'speedup':>9}")
    for name, call in cases.items():
        ref, got = call(kernels.py_), call(kernels.jit)
        for r, g in zip(ref if isinstance(ref, tuple) else (ref,), got if isinstance(got, tuple) else (got,)):
            assert np.array_equal(r, g), name
        tp = best_of(lambda: call(kernels.py_), a.repeat)
        tj = best_of(lambda: call(kernels.jit), a.repeat)
        print(f"{name:<18}{tp:>10.4f}{tj:>10.4f}{tp / tj:>8.1f}x")


if __name__ == "__main__":
    main()
