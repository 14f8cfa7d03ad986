#!/usr/bin/env python3
"""Benchmark the compiled kernels against their pure-Python twins.

Covers the two hot loops: per-sample SGD epochs and the n-gram alias scan.
Run after building the extension (`pip install -e . --no-build-isolation`):

    python benchmarks/bench_kernels.py [--docs 5000] [--rows 20000] [--dim 512]
"""

import argparse
import time

import numpy as np

from heterorep.kernels import pure

try:
    from heterorep.kernels import _ckernels as compiled
except ImportError:
    compiled = None


def timeit(fn, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_sgd(impl, rows, dim, epochs=3, seed=1):
    rng = np.random.Generator(np.random.PCG64(seed))
    X = np.ascontiguousarray(rng.standard_normal((rows, dim)))
    y = np.where(rng.random(rows) > 0.5, 1.0, -1.0)

    def run():
        w = np.zeros(dim)
        b, t = 0.0, 1
        order_rng = np.random.Generator(np.random.PCG64(seed + 1))
        for _ in range(epochs):
            order = order_rng.permutation(rows).astype(np.int64)
            b, t = impl.sgd_epoch(X, y, w, b, order, t, 0, 0.0001, 0.15, 0.01, 0.5)

    return timeit(run)


def bench_scan(impl, n_docs, seed=2):
    rng = np.random.Generator(np.random.PCG64(seed))
    vocab = [f"token{i}" for i in range(2000)]
    table = {}
    while len(table) < 20000:
        n = int(rng.integers(1, 4))
        gram = " ".join(vocab[i] for i in rng.integers(0, 2000, size=n))
        table.setdefault(gram, len(table))
    docs = [[vocab[i] for i in rng.integers(0, 2000, size=30)] for _ in range(n_docs)]

    def run():
        hits = 0
        for tokens in docs:
            hits += len(impl.scan_ngrams(tokens, table, 3))
        return hits

    return timeit(run)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--rows", type=int, default=20000, help="SGD sample count")
    parser.add_argument("--dim", type=int, default=512, help="SGD feature count")
    parser.add_argument("--docs", type=int, default=5000, help="scan document count")
    args = parser.parse_args()

    if compiled is None:
        print("compiled extension not built; showing pure timings only")

    print(f"{'kernel':<28}{'pure':>10}{'compiled':>12}{'speedup':>10}")
    for name, fn, arg in (
        (f"sgd_epoch {args.rows}x{args.dim}", bench_sgd, (args.rows, args.dim)),
        (f"scan_ngrams {args.docs} docs", bench_scan, (args.docs,)),
    ):
        t_pure = fn(pure, *arg)
        if compiled is not None:
            t_comp = fn(compiled, *arg)
            print(f"{name:<28}{t_pure:>9.3f}s{t_comp:>11.3f}s{t_pure / t_comp:>9.1f}x")
        else:
            print(f"{name:<28}{t_pure:>9.3f}s{'-':>12}{'-':>10}")


if __name__ == "__main__":
    main()
