"""Benchmark the numba kernels against the pure-numpy fallback.

Run directly:  python benchmarks/bench_backends.py [--n 20000 --d 3]

Backend selection is the same env flag the library uses, so this script
times both paths by flipping DIMSCOPE_BACKEND internally.
"""

import argparse
import os
import time

import numpy as np


def time_call(fn, *args, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def run(n, d, seed):
    from dimscope import _mst_kernels, geometry

    rng = np.random.default_rng(seed)
    pts = rng.random((n, d))

    results = {}
    for name in ("numba", "numpy"):
        os.environ["DIMSCOPE_BACKEND"] = name
        # warm up JIT compilation before timing
        _mst_kernels.prim_mst(pts[:256])
        results[f"prim[{name}]"] = time_call(_mst_kernels.prim_mst, pts)

    os.environ["DIMSCOPE_BACKEND"] = "numba"
    results["boruvka[kdtree]"] = time_call(_mst_kernels.boruvka_mst, pts)

    spec = geometry.FractalSpec("sierpinski_carpet")
    for name in ("numba", "numpy"):
        os.environ["DIMSCOPE_BACKEND"] = name
        geometry.sample_ifs_fractal(spec, 256, 0)  # warm-up
        results[f"chaos_game[{name}]"] = time_call(
            geometry.sample_ifs_fractal, spec, n * 10, 0
        )
    return results


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=20000)
    ap.add_argument("--d", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print(f"n={args.n} d={args.d}")
    for name, secs in run(args.n, args.d, args.seed).items():
        print(f"{name:24s} {secs * 1e3:10.1f} ms")


if __name__ == "__main__":
    main()
