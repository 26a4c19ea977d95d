"""Independent reference implementations the tests check the library against.

Everything here recomputes from first principles — full distance tables,
explicit feature maps, exhaustive sorting — and deliberately avoids the
library's cached/incremental code paths and its backend kernels.
"""

from __future__ import annotations

import math
from itertools import product

import numpy as np

INF = float("inf")


# --- distances, computed with plain scalar math ---

def oracle_distance(spec, a, b) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if spec.variant == 0:  # euclidean
        return math.sqrt(sum((float(x) - float(y)) ** 2 for x, y in zip(a, b)))
    if spec.variant == 1:  # minkowski
        return sum(abs(float(x) - float(y)) ** spec.p
                   for x, y in zip(a, b)) ** (1.0 / spec.p)
    # polynomial kernel dual form
    def K(u, v):
        return (sum(float(x) * float(y) for x, y in zip(u, v)) + spec.c) ** spec.d
    sq = K(a, a) - 2.0 * K(a, b) + K(b, b)
    return math.sqrt(max(0.0, sq))


# --- naive transductive p-values: rebuild everything per hypothesis ---

def _ratio(s: float, o: float) -> float:
    if o == 0.0:
        return 1.0 if s == 0.0 else INF
    return s / o


def _alpha(dmat, labels, t, k):
    same = sorted(dmat[t][s] for s in range(len(labels))
                  if s != t and labels[s] == labels[t])[:k]
    other = sorted(dmat[t][s] for s in range(len(labels))
                   if s != t and labels[s] != labels[t])[:k]
    return _ratio(sum(same), sum(other))


def naive_pvalues(X, y, C, k, spec, x) -> np.ndarray:
    """Per-class p-values for query x, recomputing every strangeness value
    from scratch on the extended example set."""
    X = np.asarray(X, dtype=float)
    l = len(y)
    p = np.empty(C)
    for j in range(C):
        pts = list(X) + [np.asarray(x, dtype=float)]
        labs = list(y) + [j]
        dmat = [[0.0] * (l + 1) for _ in range(l + 1)]
        for a in range(l + 1):
            for b in range(a + 1, l + 1):
                d = oracle_distance(spec, pts[a], pts[b])
                dmat[a][b] = d
                dmat[b][a] = d
        alphas = [_alpha(dmat, labs, t, k) for t in range(l + 1)]
        a_new = alphas[-1]
        p[j] = sum(1 for a in alphas if a >= a_new) / (l + 1)
    return p


def naive_loo_pvalues(X, y, C, k, spec) -> np.ndarray:
    """Row i: naive_pvalues of example i against all the others."""
    X = np.asarray(X, dtype=float)
    l = len(y)
    P = np.empty((l, C))
    for i in range(l):
        keep = [t for t in range(l) if t != i]
        P[i] = naive_pvalues(X[keep], [y[t] for t in keep], C, k, spec, X[i])
    return P


# --- brute-force nearest-neighbour baselines ---

def brute_knn(X, y, C, k, spec, x) -> int:
    d = [oracle_distance(spec, row, x) for row in X]
    order = sorted(range(len(d)), key=lambda t: (d[t], t))[:k]
    counts = [0] * C
    for t in order:
        counts[y[t]] += 1
    return max(range(C), key=lambda c: (counts[c], -c))


def brute_dwknn(X, y, C, k, spec, x) -> int:
    d = [oracle_distance(spec, row, x) for row in X]
    order = sorted(range(len(d)), key=lambda t: (d[t], t))[:k]
    zero = [t for t in order if d[t] == 0.0]
    if zero:
        counts = [0] * C
        for t in zero:
            counts[y[t]] += 1
        return max(range(C), key=lambda c: (counts[c], -c))
    scores = [0.0] * C
    for t in order:
        scores[y[t]] += 1.0 / d[t]
    return max(range(C), key=lambda c: (scores[c], -c))


def brute_dwknn_regress(X, targets, k, spec, x) -> float:
    d = [oracle_distance(spec, row, x) for row in X]
    order = sorted(range(len(d)), key=lambda t: (d[t], t))[:k]
    zero = [t for t in order if d[t] == 0.0]
    if zero:
        return sum(targets[t] for t in zero) / len(zero)
    num = sum(targets[t] / d[t] for t in order)
    den = sum(1.0 / d[t] for t in order)
    return num / den


# --- explicit monomial feature map for the polynomial kernel ---

def monomial_feature_map(x, d: int, c: float) -> np.ndarray:
    """phi(x) with <phi(a), phi(b)> = (<a, b> + c)^d, for c >= 0.

    One coordinate per multi-index alpha with |alpha| <= d, weighted by the
    square root of the multinomial coefficient times c^(d - |alpha|); when
    c = 0 only the degree-d monomials survive.
    """
    x = np.asarray(x, dtype=float)
    n = len(x)
    feats = []
    for alpha in product(range(d + 1), repeat=n):
        total = sum(alpha)
        if total > d:
            continue
        rest = d - total
        if c == 0.0 and rest > 0:
            continue
        coef = math.factorial(d)
        for a in alpha:
            coef //= math.factorial(a)
        coef //= math.factorial(rest)
        weight = coef * (c ** rest)
        mono = 1.0
        for xi, a in zip(x, alpha):
            mono *= xi ** a
        feats.append(math.sqrt(weight) * mono)
    return np.array(feats)


def count_monomials(n: int, d: int, with_constant: bool) -> int:
    """Feature count by explicit enumeration."""
    count = 0
    for alpha in product(range(d + 1), repeat=n):
        total = sum(alpha)
        if with_constant and total <= d:
            count += 1
        elif not with_constant and total == d:
            count += 1
    return count
