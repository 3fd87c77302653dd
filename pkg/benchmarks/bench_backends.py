"""Compiled vs numpy split-search kernels.

    python benchmarks/bench_backends.py [--repeat 5]

Times select_best_split on random matrices and full tree builds with each
backend, and checks that both return the same answer.
"""

import argparse
import time

import numpy as np

from mctree import _kernels_py, splits
from mctree.synth import SynthConfig, generate
from mctree.tree import algorithm, build_tree


def best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if splits._kernels is None:
        raise SystemExit("compiled kernels not built; run `pip install -e .` first")
    backends = {"cython": splits._kernels, "numpy": _kernels_py}

    print("select_best_split (seconds, best of %d)" % args.repeat)
    print(f"{'n':>7} {'d':>3} {'crit':>6} {'cython':>9} {'numpy':>9} {'ratio':>6}")
    rng = np.random.default_rng(0)
    for n, d in ((200, 5), (5_000, 10), (50_000, 10)):
        x = rng.normal(size=(n, d))
        y = rng.integers(0, 5, n)
        for crit in splits.Criterion:
            t = {}
            res = {}
            for name, be in backends.items():
                t[name], res[name] = best_of(lambda: splits.select_best_split(x, y, crit, backend=be), args.repeat)
            assert res["cython"] == res["numpy"], (n, d, crit)
            print(f"{n:>7} {d:>3} {crit.value:>6} {t['cython']:>9.5f} {t['numpy']:>9.5f} {t['numpy'] / t['cython']:>6.1f}")

    print("\nbuild_tree on 5000 x 10 synthetic, 4 classes (seconds)")
    data = generate(SynthConfig(5000, 4, 10, seed=0))
    saved = splits._impl
    try:
        for key in ("gini-features", "maxcut-features", "maxcut-node-means"):
            t = {}
            for name, be in backends.items():
                splits._impl = be
                t[name], _ = best_of(lambda: build_tree(data, algorithm(key, True)), max(1, args.repeat // 2))
            print(f"{key:<20} cython {t['cython']:.3f}  numpy {t['numpy']:.3f}  ratio {t['numpy'] / t['cython']:.1f}")
    finally:
        splits._impl = saved


if __name__ == "__main__":
    main()
