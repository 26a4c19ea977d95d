"""Distance measures: Euclidean, Minkowski with any positive exponent, and
polynomial-kernel induced distances computed in dual form.

A :class:`DistanceSpec` selects the measure.  Its textual form, used by the
CLI and the wire protocol, is ``euclidean``, ``minkowski:<p>`` or
``poly:<d>:<c>``.

Minkowski exponents below 1 are accepted: the result is a valid measure but
not a metric (the triangle inequality fails), which :attr:`DistanceSpec.is_metric`
advertises.  Kernel distances clamp tiny negative squared distances to zero,
which also covers negative kernel constants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

EUCLIDEAN, MINKOWSKI, POLY_KERNEL = 0, 1, 2

_VARIANT_NAMES = {EUCLIDEAN: "euclidean", MINKOWSKI: "minkowski", POLY_KERNEL: "poly"}


@dataclass(frozen=True)
class DistanceSpec:
    """A selected distance measure.

    ``variant`` is one of EUCLIDEAN, MINKOWSKI, POLY_KERNEL.  ``p`` is the
    Minkowski exponent, ``d``/``c`` the polynomial-kernel degree and constant.
    """

    variant: int = EUCLIDEAN
    p: float = 2.0
    d: int = 2
    c: float = 0.0

    def __post_init__(self):
        if self.variant not in _VARIANT_NAMES:
            raise ValueError(f"unknown distance variant {self.variant}")
        if self.variant == MINKOWSKI and not self.p > 0:
            raise ValueError(f"Minkowski exponent must be > 0, got {self.p}")
        if self.variant == POLY_KERNEL and self.d < 1:
            raise ValueError(f"polynomial kernel degree must be >= 1, got {self.d}")

    @property
    def is_metric(self) -> bool:
        """False only for Minkowski exponents below 1 (triangle inequality fails)."""
        return not (self.variant == MINKOWSKI and self.p < 1)

    @staticmethod
    def euclidean() -> "DistanceSpec":
        return DistanceSpec(EUCLIDEAN)

    @staticmethod
    def minkowski(p: float) -> "DistanceSpec":
        return DistanceSpec(MINKOWSKI, p=float(p))

    @staticmethod
    def poly(d: int, c: float = 0.0) -> "DistanceSpec":
        return DistanceSpec(POLY_KERNEL, d=int(d), c=float(c))

    def text(self) -> str:
        if self.variant == EUCLIDEAN:
            return "euclidean"
        if self.variant == MINKOWSKI:
            return f"minkowski:{format(self.p)}"
        return f"poly:{self.d}:{format(self.c)}"

    @staticmethod
    def parse(text: str) -> "DistanceSpec":
        parts = text.strip().split(":")
        try:
            if parts[0] == "euclidean" and len(parts) == 1:
                return DistanceSpec.euclidean()
            if parts[0] == "minkowski" and len(parts) == 2:
                return DistanceSpec.minkowski(float(parts[1]))
            if parts[0] == "poly" and len(parts) == 3:
                return DistanceSpec.poly(int(parts[1]), float(parts[2]))
        except ValueError as exc:
            raise ValueError(f"bad distance spec {text!r}: {exc}") from None
        raise ValueError(
            f"bad distance spec {text!r}; expected euclidean, minkowski:<p> or poly:<d>:<c>"
        )


def _check_dims(a: np.ndarray, b: np.ndarray):
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")


def _abs_pow(x: np.ndarray, p: float) -> np.ndarray:
    """|x| ** p, using repeated multiplication when p is a small integer so the
    result does not depend on libm."""
    ax = np.abs(x)
    if float(p).is_integer() and 1 <= p <= 64:
        acc = ax.copy()
        for _ in range(int(p) - 1):
            acc *= ax
        return acc
    return ax ** p


def euclidean(a, b) -> float:
    """Square root of the summed squared coordinate differences."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    _check_dims(a, b)
    d = a - b
    return float(math.sqrt(np.dot(d, d)))


def minkowski(a, b, p: float) -> float:
    """(sum |a_i - b_i|^p) ** (1/p) for any exponent p > 0."""
    if not p > 0:
        raise ValueError(f"Minkowski exponent must be > 0, got {p}")
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    _check_dims(a, b)
    s = float(np.sum(_abs_pow(a - b, p)))
    return s ** (1.0 / p)


def poly_kernel(a, b, d: int, c: float) -> float:
    """Polynomial kernel (<a, b> + c) ** d."""
    if d < 1:
        raise ValueError(f"polynomial kernel degree must be >= 1, got {d}")
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    _check_dims(a, b)
    return float((np.dot(a, b) + c) ** d)


def kernel_distance(a, b, d: int, c: float) -> float:
    """Euclidean distance in the kernel-induced feature space, computed in
    dual form as sqrt(K(a,a) - 2 K(a,b) + K(b,b)).

    The squared distance is clamped at zero: floating error and non-PSD
    kernels (c < 0) can otherwise produce small negative values.
    """
    kaa = poly_kernel(a, a, d, c)
    kbb = poly_kernel(b, b, d, c)
    kab = poly_kernel(a, b, d, c)
    lo, hi = (kaa, kbb) if kaa <= kbb else (kbb, kaa)
    sq = (lo + hi) - 2.0 * kab  # value-ordered sum keeps d(a,b) == d(b,a) exact
    return math.sqrt(max(0.0, sq))


def eval_distance(spec: DistanceSpec, a, b) -> float:
    """Distance between two vectors under the selected measure."""
    if spec.variant == EUCLIDEAN:
        return euclidean(a, b)
    if spec.variant == MINKOWSKI:
        return minkowski(a, b, spec.p)
    return kernel_distance(a, b, spec.d, spec.c)


def poly_feature_count(n: int, d: int, with_constant: bool) -> int:
    """Number of distinct monomial features of the degree-d polynomial kernel
    on n inputs: C(n+d, d) with a constant term, C(n+d-1, d) without.
    Exact integer arithmetic, no overflow."""
    if n < 1 or d < 1:
        raise ValueError("n and d must be positive")
    if with_constant:
        return math.comb(n + d, d)
    return math.comb(n + d - 1, d)


def pairwise_matrix(X: np.ndarray, spec: DistanceSpec) -> np.ndarray:
    """(l, l) matrix of pairwise distances under ``spec`` (backend-dispatched)."""
    from . import _backend
    X = np.ascontiguousarray(X, dtype=np.float64)
    return _backend.active().pairwise(X, spec.variant, spec.p, spec.d, spec.c)


def distances_to_point(X: np.ndarray, x: np.ndarray, spec: DistanceSpec) -> np.ndarray:
    """(l,) distances from every row of X to the single point x."""
    from . import _backend
    X = np.ascontiguousarray(X, dtype=np.float64)
    x = np.ascontiguousarray(x, dtype=np.float64)
    if x.ndim != 1 or x.shape[0] != X.shape[1]:
        raise ValueError(f"dimension mismatch: point has {x.shape}, data has {X.shape}")
    return _backend.active().point_distances(X, x, spec.variant, spec.p, spec.d, spec.c)
