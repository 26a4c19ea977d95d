#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Covers the hot paths: pairwise distance matrices, cache construction,
repeated classification (the grid workload) and full leave-one-out runs.
Numba timings exclude JIT compilation (one warm-up call per kernel).

Usage: python benchmarks/bench_backends.py [--wisconsin PATH]
"""

import argparse
import time
from pathlib import Path

import numpy as np

from tcmnn import _backend
from tcmnn.datamodel import DataSet, LabeledExample
from tcmnn.distance import DistanceSpec, pairwise_matrix
from tcmnn.evaluation import leave_one_out
from tcmnn.tcm import TcmConfig, build_cache, pvalues_for_distances
from tcmnn.distance import distances_to_point


def synthetic(l=600, n=9, C=2, seed=0) -> DataSet:
    rng = np.random.default_rng(seed)
    X = rng.uniform(0, 10, size=(l, n))
    y = rng.integers(0, C, size=l)
    y[:C] = np.arange(C)  # every class populated
    return DataSet(name="bench", n=n, C=C,
                   class_names=tuple(f"c{j}" for j in range(C)),
                   classes_known=True,
                   examples=tuple(LabeledExample(tuple(r), int(lab))
                                  for r, lab in zip(X, y)))


def load_wisconsin(path: Path) -> DataSet:
    examples = []
    for line in path.read_text().splitlines():
        fields = line.strip().split(",")
        if len(fields) != 11 or "?" in fields:
            continue
        examples.append(LabeledExample(tuple(float(v) for v in fields[1:10]),
                                       0 if fields[10] == "2" else 1))
    return DataSet(name="wbc683", n=9, C=2, class_names=("Benign", "Malignant"),
                   classes_known=True, examples=tuple(examples))


def timed(fn, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench(ds: DataSet, label: str):
    config = TcmConfig(k=1)
    specs = {
        "pairwise euclidean": DistanceSpec.euclidean(),
        "pairwise minkowski:0.5": DistanceSpec.minkowski(0.5),
        "pairwise poly:2:0.5": DistanceSpec.poly(2, 0.5),
    }
    X = ds.features_matrix()
    rng = np.random.default_rng(1)
    queries = rng.uniform(X.min(), X.max(), size=(200, ds.n))

    rows = []
    results = {}
    for name in ("numpy", "numba"):
        _backend.use(name)
        # warm-up compiles the numba kernels so timings measure steady state
        pairwise_matrix(X[:10], DistanceSpec.euclidean())
        cache_small = build_cache(
            ds.replace_examples(ds.examples[:40], name="warm"), config)
        pvalues_for_distances(
            cache_small, distances_to_point(X[:40], queries[0],
                                            DistanceSpec.euclidean()))
        leave_one_out(ds.replace_examples(ds.examples[:40], name="warm"),
                      config)

        times = {}
        for key, spec in specs.items():
            times[key] = timed(lambda s=spec: pairwise_matrix(X, s))
        times["build cache"] = timed(lambda: build_cache(ds, config))
        cache = build_cache(ds, config)

        def classify_batch():
            for q in queries:
                d = distances_to_point(X, q, DistanceSpec.euclidean())
                pvalues_for_distances(cache, d)

        times["classify x200"] = timed(classify_batch)
        times["leave-one-out"] = timed(lambda: leave_one_out(ds, config),
                                       repeat=1)
        results[name] = times

    print(f"\n== {label} (l={ds.l}, n={ds.n}) ==")
    print(f"{'operation':24s} {'numpy':>10s} {'numba':>10s} {'speedup':>9s}")
    for key in results["numpy"]:
        tn = results["numpy"][key]
        tb = results["numba"][key]
        print(f"{key:24s} {tn * 1e3:9.1f}ms {tb * 1e3:9.1f}ms {tn / tb:8.1f}x")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--wisconsin",
                        default=str(Path(__file__).resolve().parents[1]
                                    / "data" / "breast-cancer-wisconsin.data"))
    args = parser.parse_args()
    bench(synthetic(), "synthetic uniform")
    wpath = Path(args.wisconsin)
    if wpath.is_file():
        bench(load_wisconsin(wpath), "Wisconsin breast cancer")
    _backend._active = None


if __name__ == "__main__":
    main()
