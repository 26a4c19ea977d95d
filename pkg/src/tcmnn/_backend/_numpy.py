"""Pure numpy backend: vectorized pairwise distances and the incremental
nonconformity/p-value kernels.  Semantics are defined by the naive oracle the
test suite carries; this module reproduces it with array operations only.
"""

from __future__ import annotations

import numpy as np

from .common import (INF, alpha_from_sums_array, ascending_sums, neighbor_lists,
                     seq_sum, smallest_ascending)

EUCLIDEAN, MINKOWSKI, POLY_KERNEL = 0, 1, 2
_CHUNK = 256


def _abs_pow(x: np.ndarray, p: float) -> np.ndarray:
    ax = np.abs(x)
    if float(p).is_integer() and 1 <= p <= 64:
        acc = ax.copy()
        for _ in range(int(p) - 1):
            acc *= ax
        return acc
    return ax ** p


def pairwise(X: np.ndarray, variant: int, p: float, d: int, c: float) -> np.ndarray:
    l = X.shape[0]
    D = np.zeros((l, l), dtype=np.float64)
    if variant == POLY_KERNEL:
        G = X @ X.T
        Kd = (np.diag(G) + c) ** d
        sq = Kd[:, None] - 2.0 * (G + c) ** d + Kd[None, :]
        np.maximum(sq, 0.0, out=sq)
        D = np.sqrt(sq)
    else:
        for i0 in range(0, l, _CHUNK):
            i1 = min(i0 + _CHUNK, l)
            diff = X[i0:i1, None, :] - X[None, :, :]
            if variant == EUCLIDEAN:
                D[i0:i1] = np.sqrt((diff * diff).sum(axis=2))
            else:
                D[i0:i1] = _abs_pow(diff, p).sum(axis=2) ** (1.0 / p)
    # exact symmetry and a clean diagonal, by construction
    U = np.triu(D, 1)
    return U + U.T


def point_distances(X: np.ndarray, x: np.ndarray, variant: int, p: float,
                    d: int, c: float) -> np.ndarray:
    if variant == POLY_KERNEL:
        g = X @ x
        kaa = ((X * X).sum(axis=1) + c) ** d
        kbb = (float(x @ x) + c) ** d
        sq = kaa - 2.0 * (g + c) ** d + kbb
        np.maximum(sq, 0.0, out=sq)
        return np.sqrt(sq)
    diff = X - x[None, :]
    if variant == EUCLIDEAN:
        return np.sqrt((diff * diff).sum(axis=1))
    return _abs_pow(diff, p).sum(axis=1) ** (1.0 / p)


def _merged_sums(stored: np.ndarray, lengths: np.ndarray, k: int,
                 dist: np.ndarray) -> np.ndarray:
    """Ascending-order sums after merging each example's query distance into
    its stored list (truncated to k entries)."""
    M = np.sort(np.concatenate([stored[:, :k], dist[:, None]], axis=1), axis=1)
    sums = np.cumsum(np.where(np.isfinite(M), M, 0.0), axis=1)
    new_len = np.minimum(lengths + 1, k)
    return sums[np.arange(len(M)), new_len - 1]


def classify_pvalues(labels: np.ndarray, C: int, k: int,
                     same_dist: np.ndarray, same_len: np.ndarray, same_sum: np.ndarray,
                     other_dist: np.ndarray, other_len: np.ndarray, other_sum: np.ndarray,
                     alpha_base: np.ndarray, dist: np.ndarray) -> np.ndarray:
    l = len(labels)
    p = np.empty(C, dtype=np.float64)
    same_kth = same_dist[:, k - 1]
    other_kth = other_dist[:, k - 1]
    merged_same = _merged_sums(same_dist, same_len, k, dist)
    merged_other = _merged_sums(other_dist, other_len, k, dist)
    alpha_same_upd = alpha_from_sums_array(merged_same, other_sum)
    alpha_other_upd = alpha_from_sums_array(same_sum, merged_other)
    for j in range(C):
        is_j = labels == j
        upd_same = is_j & ((same_len < k) | (dist < same_kth))
        upd_other = ~is_j & ((other_len < k) | (dist < other_kth))
        a = np.where(upd_same, alpha_same_upd,
                     np.where(upd_other, alpha_other_upd, alpha_base))
        s_new = seq_sum(smallest_ascending(dist[is_j], k))
        o_new = seq_sum(smallest_ascending(dist[~is_j], k))
        if o_new == 0.0:
            a_new = 1.0 if s_new == 0.0 else INF
        else:
            a_new = s_new / o_new
        p[j] = (1 + np.count_nonzero(a >= a_new)) / (l + 1)
    return p


def loo_pvalues(D: np.ndarray, labels: np.ndarray, C: int, k: int) -> np.ndarray:
    """p-values of every example against the rest, hypothesising each class.

    Uses (k+1)-deep nearest lists so that removing the held-out example from
    any stored list never exposes an unknown neighbour.
    """
    l = len(labels)
    cap = k + 1
    s_idx, s_dist, s_len, o_idx, o_dist, o_len = neighbor_lists(D, labels, cap)
    col = np.arange(cap)
    rows = np.arange(l)
    s_shift = np.concatenate([s_dist[:, 1:], np.full((l, 1), INF)], axis=1)
    o_shift = np.concatenate([o_dist[:, 1:], np.full((l, 1), INF)], axis=1)
    P = np.empty((l, C), dtype=np.float64)

    for i in range(l):
        dist = D[i]
        s_hit = (s_idx == i).any(axis=1)
        o_hit = (o_idx == i).any(axis=1)
        s_r = np.where(s_hit, (s_idx == i).argmax(axis=1), cap)
        o_r = np.where(o_hit, (o_idx == i).argmax(axis=1), cap)
        eff_s = np.where(col[None, :] < s_r[:, None], s_dist, s_shift)
        eff_o = np.where(col[None, :] < o_r[:, None], o_dist, o_shift)
        eff_s_len = np.minimum(s_len - s_hit, k)
        eff_o_len = np.minimum(o_len - o_hit, k)
        eff_s_sum = ascending_sums(eff_s[:, :k], eff_s_len)
        eff_o_sum = ascending_sums(eff_o[:, :k], eff_o_len)
        base = alpha_from_sums_array(eff_s_sum, eff_o_sum)
        s_kth = eff_s[:, k - 1]
        o_kth = eff_o[:, k - 1]
        merged_s = _merged_sums(eff_s, eff_s_len, k, dist)
        merged_o = _merged_sums(eff_o, eff_o_len, k, dist)
        a_s_upd = alpha_from_sums_array(merged_s, eff_o_sum)
        a_o_upd = alpha_from_sums_array(eff_s_sum, merged_o)
        not_i = rows != i
        for j in range(C):
            is_j = labels == j
            upd_same = is_j & ((eff_s_len < k) | (dist < s_kth))
            upd_other = ~is_j & ((eff_o_len < k) | (dist < o_kth))
            a = np.where(upd_same, a_s_upd,
                         np.where(upd_other, a_o_upd, base))
            s_new = seq_sum(smallest_ascending(dist[is_j & not_i], k))
            o_new = seq_sum(smallest_ascending(dist[~is_j & not_i], k))
            if o_new == 0.0:
                a_new = 1.0 if s_new == 0.0 else INF
            else:
                a_new = s_new / o_new
            P[i, j] = (1 + np.count_nonzero(a[not_i] >= a_new)) / l
    return P
