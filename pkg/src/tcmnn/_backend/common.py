"""Shared helpers for both backends: nonconformity ratios, ascending sums and
stable nearest-list construction.

Every sum of stored distances is a sequential sum in ascending order, so the
incremental classification path, the cache file round-trip and the leave-one-out
shortcut all reproduce each other bit for bit.
"""

from __future__ import annotations

import numpy as np

INF = np.inf


def alpha_ratio(same_sum: float, other_sum: float) -> float:
    """Strangeness: ratio of same-class to other-class distance sums.

    Degenerate rules: 0/x -> 0 (least strange), x/0 -> +inf (strangest),
    0/0 -> 1 (neutral).
    """
    if other_sum == 0.0:
        return 1.0 if same_sum == 0.0 else INF
    return same_sum / other_sum


def ascending_sums(dists: np.ndarray, lengths: np.ndarray) -> np.ndarray:
    """Per-row sequential sum of the first ``lengths[t]`` entries.

    ``dists`` is (l, cap) ascending with +inf padding; rows with length 0 sum
    to 0.
    """
    finite = np.where(np.isfinite(dists), dists, 0.0)
    sums = np.cumsum(finite, axis=1)
    out = np.zeros(len(dists), dtype=np.float64)
    nonzero = lengths > 0
    out[nonzero] = sums[nonzero, lengths[nonzero] - 1]
    return out


def alpha_from_sums_array(same_sums: np.ndarray, other_sums: np.ndarray) -> np.ndarray:
    """Vectorized alpha_ratio."""
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(other_sums == 0.0,
                       np.where(same_sums == 0.0, 1.0, INF),
                       same_sums / np.where(other_sums == 0.0, 1.0, other_sums))
    return out


def neighbor_lists(D: np.ndarray, labels: np.ndarray, cap: int):
    """For every training example, the ``cap`` nearest same-class and
    other-class neighbours (self excluded).

    Ties are kept in training order (stable sort).  Returns
    (same_idx, same_dist, same_len, other_idx, other_dist, other_len) where
    the index/distance arrays are (l, cap) with -1 / +inf padding.
    """
    l = len(labels)
    order = np.argsort(D, axis=1, kind="stable")
    same_idx = np.full((l, cap), -1, dtype=np.int64)
    same_dist = np.full((l, cap), INF, dtype=np.float64)
    same_len = np.zeros(l, dtype=np.int64)
    other_idx = np.full((l, cap), -1, dtype=np.int64)
    other_dist = np.full((l, cap), INF, dtype=np.float64)
    other_len = np.zeros(l, dtype=np.int64)
    for t in range(l):
        row = order[t]
        row = row[row != t]
        is_same = labels[row] == labels[t]
        s_pick = row[is_same][:cap]
        o_pick = row[~is_same][:cap]
        same_len[t] = len(s_pick)
        other_len[t] = len(o_pick)
        same_idx[t, :len(s_pick)] = s_pick
        same_dist[t, :len(s_pick)] = D[t, s_pick]
        other_idx[t, :len(o_pick)] = o_pick
        other_dist[t, :len(o_pick)] = D[t, o_pick]
    return same_idx, same_dist, same_len, other_idx, other_dist, other_len


def smallest_ascending(values: np.ndarray, k: int) -> np.ndarray:
    """The min(k, len) smallest entries, ascending."""
    if len(values) <= k:
        return np.sort(values, kind="stable")
    part = np.partition(values, k - 1)[:k]
    part.sort()
    return part


def seq_sum(values: np.ndarray) -> float:
    """Sequential left-to-right sum (not numpy pairwise summation)."""
    total = 0.0
    for v in values:
        total += v
    return total
