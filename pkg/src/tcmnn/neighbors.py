"""Traditional nearest-neighbour baselines: majority-vote KNN, distance-weighted
KNN classification, and distance-weighted KNN regression.

Weights are the reciprocal distances 1/d.  A neighbour at distance zero makes
the reciprocal undefined; in the limit such neighbours dominate, so decisions
fall back to the zero-distance neighbours alone (majority vote for
classification, plain mean for regression).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .datamodel import DataSet
from .distance import DistanceSpec, distances_to_point


@dataclass(frozen=True)
class NeighborList:
    """The k nearest training examples, ascending by distance, ties in
    training order.  ``weights`` holds 1/d, with +inf marking zero distance."""

    indices: tuple[int, ...]
    distances: tuple[float, ...]
    weights: tuple[float, ...]


def k_nearest(train: DataSet, x, k: int, spec: DistanceSpec) -> NeighborList:
    """The k training examples nearest to x (all of them when k >= l)."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if k > train.l:
        raise ValueError(f"k={k} exceeds the number of training examples {train.l}")
    x = np.asarray(x, dtype=np.float64)
    d = distances_to_point(train.features_matrix(), x, spec)
    order = np.argsort(d, kind="stable")[:k]
    dists = d[order]
    with np.errstate(divide="ignore"):
        weights = np.where(dists > 0, 1.0 / np.where(dists > 0, dists, 1.0), np.inf)
    return NeighborList(tuple(int(i) for i in order),
                        tuple(float(v) for v in dists),
                        tuple(float(w) for w in weights))


def _majority(labels: np.ndarray, C: int) -> int:
    counts = np.bincount(labels, minlength=C)
    return int(np.argmax(counts))


def knn_classify(train: DataSet, x, k: int, spec: DistanceSpec) -> int:
    """Majority label among the k nearest neighbours, ties to the lowest
    class index."""
    nn = k_nearest(train, x, k, spec)
    y = train.labels_array()
    return _majority(y[list(nn.indices)], train.C)


def dwknn_classify(train: DataSet, x, k: int, spec: DistanceSpec) -> int:
    """Class with the largest summed reciprocal-distance weight among the k
    nearest neighbours."""
    nn = k_nearest(train, x, k, spec)
    y = train.labels_array()
    labels = y[list(nn.indices)]
    dists = np.array(nn.distances)
    zero = dists == 0.0
    if zero.any():
        return _majority(labels[zero], train.C)
    scores = np.zeros(train.C)
    for lab, d in zip(labels, dists):
        scores[lab] += 1.0 / d
    return int(np.argmax(scores))


def dwknn_regress(X, targets, x, k: int, spec: DistanceSpec) -> float:
    """Weighted mean of the k nearest targets with weights 1/d; the plain mean
    of the zero-distance targets when any neighbour coincides with x."""
    X = np.asarray(X, dtype=np.float64)
    targets = np.asarray(targets, dtype=np.float64)
    if len(X) != len(targets):
        raise ValueError("feature rows and targets differ in length")
    if k < 1 or k > len(X):
        raise ValueError(f"k={k} outside [1, {len(X)}]")
    d = distances_to_point(X, np.asarray(x, dtype=np.float64), spec)
    order = np.argsort(d, kind="stable")[:k]
    dists = d[order]
    vals = targets[order]
    zero = dists == 0.0
    if zero.any():
        return float(vals[zero].mean())
    w = 1.0 / dists
    return float((w * vals).sum() / w.sum())
