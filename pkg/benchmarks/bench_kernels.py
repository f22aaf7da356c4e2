"""Compare the compiled and pure-Python kernels on representative workloads.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import time

import numpy as np

from selfsim import _pykernel, gallery
from selfsim.approximator import pointed_moves, enumerate_cells

try:
    from selfsim import _ckernel
except ImportError:  # extension not built
    _ckernel = None


def _best(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def workloads():
    rng = np.random.default_rng(0)
    n = 200_000
    yield "random partition (200k nodes, 150k edges)", "partition", (
        n, rng.integers(0, n, 150_000), rng.integers(0, n, 150_000))
    M = gallery.sierpinski_system()
    cells = enumerate_cells(M, 1, 8)
    _, _, left, right = pointed_moves(M, cells)
    size = int(max(left.max(), right.max())) + 1
    yield f"sierpinski depth-8 pointed moves ({size} nodes)", "partition", (size, left, right)
    labels = _pykernel.partition(size, left, right)
    owner = np.arange(size, dtype=np.int64) % len(cells)
    yield "sierpinski depth-8 touching pairs", "touching_pairs", (owner, labels, int(labels.max()) + 1)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    print(f"{'workload':52s} {'python s':>10s} {'compiled s':>11s} {'speedup':>8s}")
    for name, op, inputs in workloads():
        py = _best(lambda: getattr(_pykernel, op)(*inputs), args.repeat)
        if _ckernel is None:
            print(f"{name:52s} {py:10.4f} {'n/a':>11s} {'n/a':>8s}")
            continue
        c = _best(lambda: getattr(_ckernel, op)(*inputs), args.repeat)
        a, b = getattr(_pykernel, op)(*inputs), getattr(_ckernel, op)(*inputs)
        same = all(np.array_equal(x, y) for x, y in zip(a, b)) if isinstance(a, tuple) else np.array_equal(a, b)
        assert same, f"kernels disagree on {name}"
        print(f"{name:52s} {py:10.4f} {c:11.4f} {py / c:7.1f}x")


if __name__ == "__main__":
    main()
