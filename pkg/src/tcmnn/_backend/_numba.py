"""Numba backend: the same kernels as the numpy backend, compiled with
``@njit``.  Inner loops keep every distance sum in ascending order so results
match the numpy backend and the naive oracle to floating-point noise.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .common import neighbor_lists

EUCLIDEAN, MINKOWSKI, POLY_KERNEL = 0, 1, 2
INF = np.inf


@njit(cache=True)
def _abs_pow_scalar(x: float, p: float) -> float:
    ax = abs(x)
    ip = int(p)
    if ip == p and 1 <= ip <= 64:
        acc = ax
        for _ in range(ip - 1):
            acc *= ax
        return acc
    return ax ** p


@njit(cache=True)
def _pair_dist(a, b, variant, p, d, c):
    if variant == POLY_KERNEL:
        gaa = 0.0
        gab = 0.0
        gbb = 0.0
        for m in range(a.shape[0]):
            gaa += a[m] * a[m]
            gab += a[m] * b[m]
            gbb += b[m] * b[m]
        sq = (gaa + c) ** d - 2.0 * (gab + c) ** d + (gbb + c) ** d
        if sq < 0.0:
            sq = 0.0
        return np.sqrt(sq)
    if variant == EUCLIDEAN:
        s = 0.0
        for m in range(a.shape[0]):
            diff = a[m] - b[m]
            s += diff * diff
        return np.sqrt(s)
    s = 0.0
    for m in range(a.shape[0]):
        s += _abs_pow_scalar(a[m] - b[m], p)
    return s ** (1.0 / p)


@njit(cache=True)
def _pairwise(X, variant, p, d, c):
    l = X.shape[0]
    D = np.zeros((l, l), dtype=np.float64)
    for i in range(l):
        for j in range(i + 1, l):
            v = _pair_dist(X[i], X[j], variant, p, d, c)
            D[i, j] = v
            D[j, i] = v
    return D


@njit(cache=True)
def _point_distances(X, x, variant, p, d, c):
    l = X.shape[0]
    out = np.empty(l, dtype=np.float64)
    for i in range(l):
        out[i] = _pair_dist(X[i], x, variant, p, d, c)
    return out


def pairwise(X, variant, p, d, c):
    return _pairwise(X, variant, float(p), int(d), float(c))


def point_distances(X, x, variant, p, d, c):
    return _point_distances(X, x, variant, float(p), int(d), float(c))


@njit(cache=True)
def _ratio(s, o):
    if o == 0.0:
        if s == 0.0:
            return 1.0
        return INF
    return s / o


@njit(cache=True)
def _merged_sum(row, m, k, dnew):
    """Ascending sum after inserting dnew into the first m stored entries and
    truncating to k."""
    q = m + 1
    if q > k:
        q = k
    total = 0.0
    taken = 0
    idx = 0
    used = False
    while taken < q:
        if not used and (idx >= m or dnew <= row[idx]):
            total += dnew
            used = True
        else:
            total += row[idx]
            idx += 1
        taken += 1
    return total


@njit(cache=True)
def _insert_smallest(buf, size, k, value):
    """Keep the k smallest values seen so far, ascending.  Returns new size."""
    if size < k:
        pos = size
        while pos > 0 and buf[pos - 1] > value:
            buf[pos] = buf[pos - 1]
            pos -= 1
        buf[pos] = value
        return size + 1
    if value >= buf[k - 1]:
        return size
    pos = k - 1
    while pos > 0 and buf[pos - 1] > value:
        buf[pos] = buf[pos - 1]
        pos -= 1
    buf[pos] = value
    return size


@njit(cache=True)
def _alpha_new(labels, dist, skip, j, k):
    """Strangeness of the query under hypothesis j: ascending sums of the k
    nearest class-j and non-j training distances."""
    l = labels.shape[0]
    bs = np.empty(k, dtype=np.float64)
    bo = np.empty(k, dtype=np.float64)
    ns = 0
    no = 0
    for t in range(l):
        if t == skip:
            continue
        if labels[t] == j:
            ns = _insert_smallest(bs, ns, k, dist[t])
        else:
            no = _insert_smallest(bo, no, k, dist[t])
    s = 0.0
    for r in range(ns):
        s += bs[r]
    o = 0.0
    for r in range(no):
        o += bo[r]
    return _ratio(s, o)


@njit(cache=True)
def _classify(labels, C, k, same_dist, same_len, same_sum,
              other_dist, other_len, other_sum, alpha_base, dist):
    l = labels.shape[0]
    p = np.empty(C, dtype=np.float64)
    for j in range(C):
        a_new = _alpha_new(labels, dist, -1, j, k)
        cnt = 1
        for t in range(l):
            dt = dist[t]
            if labels[t] == j:
                m = same_len[t]
                if m < k or dt < same_dist[t, k - 1]:
                    a = _ratio(_merged_sum(same_dist[t], m, k, dt), other_sum[t])
                else:
                    a = alpha_base[t]
            else:
                m = other_len[t]
                if m < k or dt < other_dist[t, k - 1]:
                    a = _ratio(same_sum[t], _merged_sum(other_dist[t], m, k, dt))
                else:
                    a = alpha_base[t]
            if a >= a_new:
                cnt += 1
        p[j] = cnt / (l + 1)
    return p


def classify_pvalues(labels, C, k, same_dist, same_len, same_sum,
                     other_dist, other_len, other_sum, alpha_base, dist):
    return _classify(labels, int(C), int(k), same_dist, same_len, same_sum,
                     other_dist, other_len, other_sum, alpha_base, dist)


@njit(cache=True)
def _effective_row(idx_row, dist_row, length, exclude, k, out):
    """Copy the stored (k+1)-deep list into ``out`` with ``exclude`` removed
    and at most k entries kept.  Returns (length, ascending sum)."""
    m = 0
    for r in range(length):
        if idx_row[r] == exclude:
            continue
        if m < k:
            out[m] = dist_row[r]
            m += 1
    s = 0.0
    for r in range(m):
        s += out[r]
    return m, s


@njit(cache=True)
def _loo(D, labels, C, k, s_idx, s_dist, s_len, o_idx, o_dist, o_len):
    l = labels.shape[0]
    P = np.empty((l, C), dtype=np.float64)
    eff_s = np.empty((l, k), dtype=np.float64)
    eff_o = np.empty((l, k), dtype=np.float64)
    eff_s_len = np.empty(l, dtype=np.int64)
    eff_o_len = np.empty(l, dtype=np.int64)
    eff_s_sum = np.empty(l, dtype=np.float64)
    eff_o_sum = np.empty(l, dtype=np.float64)
    base = np.empty(l, dtype=np.float64)
    for i in range(l):
        dist = D[i]
        for t in range(l):
            if t == i:
                continue
            m, s = _effective_row(s_idx[t], s_dist[t], s_len[t], i, k, eff_s[t])
            eff_s_len[t] = m
            eff_s_sum[t] = s
            m, s = _effective_row(o_idx[t], o_dist[t], o_len[t], i, k, eff_o[t])
            eff_o_len[t] = m
            eff_o_sum[t] = s
            base[t] = _ratio(eff_s_sum[t], eff_o_sum[t])
        for j in range(C):
            a_new = _alpha_new(labels, dist, i, j, k)
            cnt = 1
            for t in range(l):
                if t == i:
                    continue
                dt = dist[t]
                if labels[t] == j:
                    m = eff_s_len[t]
                    if m < k or dt < eff_s[t, k - 1]:
                        a = _ratio(_merged_sum(eff_s[t], m, k, dt), eff_o_sum[t])
                    else:
                        a = base[t]
                else:
                    m = eff_o_len[t]
                    if m < k or dt < eff_o[t, k - 1]:
                        a = _ratio(eff_s_sum[t], _merged_sum(eff_o[t], m, k, dt))
                    else:
                        a = base[t]
                if a >= a_new:
                    cnt += 1
            P[i, j] = cnt / l
    return P


def loo_pvalues(D, labels, C, k):
    cap = k + 1
    s_idx, s_dist, s_len, o_idx, o_dist, o_len = neighbor_lists(D, labels, cap)
    return _loo(D, labels, int(C), int(k), s_idx, s_dist, s_len, o_idx, o_dist, o_len)
