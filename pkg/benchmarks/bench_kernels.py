#!/usr/bin/env python3
"""Benchmark the compiled clustering kernels against the numpy fallback.

Usage:
    python benchmarks/bench_kernels.py [--rows 20000] [--dim 502] [--k 30]

Times the two hot kernels (assign, accumulate) in isolation and a full
k-means fit with each backend, and checks the backends agree.
"""

import argparse
import time

import numpy as np


def time_call(fn, *args, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - start)
    return best, out


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--rows", type=int, default=20_000)
    parser.add_argument("--dim", type=int, default=502)
    parser.add_argument("--k", type=int, default=30)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    from soundtex import FeatureSet, _kernels_py
    import soundtex.cluster as cluster_mod

    try:
        from soundtex import _kernels
    except ImportError:
        _kernels = None

    rng = np.random.default_rng(args.seed)
    X = np.ascontiguousarray(rng.normal(size=(args.rows, args.dim)))
    C = np.ascontiguousarray(rng.normal(size=(args.k, args.dim)))

    print(f"rows={args.rows} dim={args.dim} k={args.k}")
    backends = [("numpy", _kernels_py)] + ([("compiled", _kernels)] if _kernels else [])

    results = {}
    for name, backend in backends:
        t_assign, (labels, dists) = time_call(backend.assign, X, C)
        t_accum, (sums, counts) = time_call(backend.accumulate, X, labels, args.k)
        results[name] = (labels, dists, sums, counts)
        print(f"{name:>9}: assign {t_assign * 1e3:8.1f} ms   accumulate {t_accum * 1e3:8.1f} ms")

    if _kernels:
        l_np, d_np, s_np, c_np = results["numpy"]
        l_c, d_c, s_c, c_c = results["compiled"]
        assert np.array_equal(l_np, l_c), "backends disagree on labels"
        assert np.abs(d_np - d_c).max() < 1e-9, "backends disagree on distances"
        assert np.array_equal(c_np, c_c) and np.abs(s_np - s_c).max() < 1e-9
        print("backends agree (labels equal, sums within 1e-9)")

    fs = FeatureSet(X, tuple(f"r{i}" for i in range(args.rows)), "texture")
    saved = cluster_mod._backend
    try:
        for name, backend in backends:
            cluster_mod._backend = backend
            start = time.perf_counter()
            model = cluster_mod.kmeans_fit(fs, k=args.k, seed=args.seed, max_iters=50)
            elapsed = time.perf_counter() - start
            print(
                f"{name:>9}: kmeans_fit {elapsed:6.2f} s "
                f"({model.n_iters} iterations, inertia {model.inertia:.4g})"
            )
    finally:
        cluster_mod._backend = saved


if __name__ == "__main__":
    main()
