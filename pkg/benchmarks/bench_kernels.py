"""Compare the numba and pure-numpy row-reduction kernels.

    python benchmarks/bench_kernels.py [--repeat 5]

Both variants are called directly, so the MODLAT_DISABLE_NUMBA flag does
not matter here. Compilation happens in a warm-up call before timing.
"""
import argparse
import time

import numpy as np

from modlat import _jit, kernels

CASES = [
    # (label, kind, shape, q)
    ("rref 16x16", "rref", (16, 16), 101),
    ("rref 64x64", "rref", (64, 64), 101),
    ("rref 128x256", "rref", (128, 256), 2),
    ("rank batch 20000 x 8x8", "batch", (20_000, 8, 8), 2),
    ("rank batch 5000 x 16x32", "batch", (5_000, 16, 32), 2),
    ("rank batch 2000 x 16x16", "batch", (2_000, 16, 16), 101),
]


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    print(f"numba installed: {_jit.NUMBA_INSTALLED}")
    print(f"{'case':<26}{'numpy ms':>12}{'numba ms':>12}{'speedup':>10}")
    for label, kind, shape, q in CASES:
        A = rng.integers(0, q, size=shape, dtype=np.int64)
        if kind == "rref":
            np_fn, nb_fn = kernels.rref_numpy, kernels.rref_numba
        else:
            np_fn, nb_fn = kernels.rank_batch_numpy, kernels.rank_batch_numba
        t_np = best_of(lambda: np_fn(A, q), args.repeat)
        if nb_fn is None:
            print(f"{label:<26}{t_np * 1e3:>12.2f}{'-':>12}{'-':>10}")
            continue
        nb_fn(A, q)  # compile
        # the two must agree before a timing means anything
        a, b = np_fn(A, q), nb_fn(A, q)
        assert all(np.array_equal(x, y) for x, y in zip(a, b)) if kind == "rref" else np.array_equal(a, b)
        t_nb = best_of(lambda: nb_fn(A, q), args.repeat)
        print(f"{label:<26}{t_np * 1e3:>12.2f}{t_nb * 1e3:>12.2f}{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
