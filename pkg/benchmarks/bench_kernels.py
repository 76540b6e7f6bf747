#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Times all-pairs shortest paths and the stress-minimizing layout loop on
random connected graphs of growing size, checks that both backends agree,
and prints a small table. Run from the repository root:

    python3 benchmarks/bench_kernels.py [--sizes 20,46,100,200] [--repeats 3]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from cowordmap import _kernels


def random_distance_matrix(rng: np.random.Generator, n: int) -> np.ndarray:
    """Edge-length matrix of a random connected graph (inf = no edge)."""
    d = np.full((n, n), np.inf)
    np.fill_diagonal(d, 0.0)
    for i in range(n - 1):  # spanning chain keeps it connected
        w = float(rng.integers(1, 6))
        d[i, i + 1] = d[i + 1, i] = 1.0 / w
    extra = 2 * n
    for _ in range(extra):
        i, j = rng.integers(0, n, size=2)
        if i == j:
            continue
        w = float(rng.integers(1, 6))
        d[i, j] = d[j, i] = min(d[i, j], 1.0 / w)
    return d


def circle_start(n: int, radius: float) -> np.ndarray:
    angles = 2.0 * np.pi * np.arange(n) / n
    return np.ascontiguousarray(np.column_stack((radius * np.cos(angles), radius * np.sin(angles))))


def timed(fn, repeats: int) -> float:
    best = np.inf
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_size(n: int, repeats: int, have_numba: bool) -> None:
    rng = np.random.default_rng(n)
    lengths = random_distance_matrix(rng, n)

    apsp_numpy = timed(lambda: _kernels._floyd_warshall_numpy(lengths.copy()), repeats)
    row = f"{n:>5} | fw numpy {apsp_numpy * 1e3:9.2f} ms"
    dmat = _kernels._floyd_warshall_numpy(lengths.copy())
    if have_numba:
        apsp_nb = timed(lambda: _kernels._floyd_warshall_nb(lengths.copy()), repeats)
        dmat_nb = _kernels._floyd_warshall_nb(lengths.copy())
        agree = np.allclose(dmat, dmat_nb)
        row += f" | fw numba {apsp_nb * 1e3:9.2f} ms | x{apsp_numpy / apsp_nb:6.1f} | agree={agree}"
    print(row)

    radius = float(dmat.max()) / 2.0
    tol, max_outer, max_inner = 1e-4, 20_000, 50

    def run_numpy():
        pos = circle_start(n, radius)
        return _kernels._kk_minimize_numpy(pos, dmat, 1.0, tol, max_outer, max_inner)

    kk_numpy = timed(run_numpy, repeats)
    _, _, trace_np = run_numpy()
    row = f"{'':>5} | kk numpy {kk_numpy * 1e3:9.2f} ms"
    if have_numba:

        def run_nb():
            pos = circle_start(n, radius)
            return _kernels._kk_minimize_nb(pos, dmat, 1.0, tol, max_outer, max_inner)

        kk_nb = timed(run_nb, repeats)
        _, _, trace_nb = run_nb()
        # backends follow their own float trajectories; final stress must agree
        rel = abs(trace_np[-1] - trace_nb[-1]) / max(abs(trace_np[-1]), 1e-12)
        row += f" | kk numba {kk_nb * 1e3:9.2f} ms | x{kk_numpy / kk_nb:6.1f} | stress rel diff {rel:.1e}"
    print(row)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="20,46,100,200")
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    have_numba = _kernels._HAVE_NUMBA
    print(f"backend default: {_kernels.BACKEND} (COWORDMAP_NO_NUMBA toggles the fallback)")
    if have_numba:
        print("warming JIT kernels...")
        _kernels.warmup()
        _kernels._floyd_warshall_nb(random_distance_matrix(np.random.default_rng(0), 4))
    for n in sizes:
        bench_size(n, args.repeats, have_numba)


if __name__ == "__main__":
    main()
