"""Transductive confidence machine over k-nearest-neighbour nonconformity.

Strangeness of a labeled example is the ratio of the summed k smallest
distances to same-class examples over the summed k smallest distances to
other-class examples.  A query is classified by hypothesising each class,
adjusting the cached per-example nearest lists where the query intrudes, and
converting the resulting strangeness ranks into per-class p-values:

    p = #(strangeness values >= the query's) / (l + 1)

counting the query itself.  The largest p-value names the prediction, 1 minus
the second largest is its confidence, and the largest is its credibility.

The cache of per-example nearest lists is immutable after construction; a
classification adjusts worker-local copies only, so any number of queries may
run concurrently against a shared cache.  Cache files bind to their training
set, k and distance spec through a 64-bit fingerprint (BLAKE2b, digest size 8,
over the canonical little-endian bytes of the training matrix, labels, k and
the distance-spec text).
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from . import _backend
from ._backend.common import alpha_ratio, ascending_sums, neighbor_lists
from .datamodel import DataSet
from .distance import DistanceSpec, distances_to_point, pairwise_matrix

INF = np.inf


class TcmError(ValueError):
    """Raised for invalid TCM configurations or inputs."""


class CacheMismatchError(TcmError):
    """Raised when a cache file does not match the training data it is loaded for."""


@dataclass(frozen=True)
class TcmConfig:
    """Nearest-neighbour count and distance measure for the TCM."""

    k: int = 1
    spec: DistanceSpec = DistanceSpec.euclidean()

    def __post_init__(self):
        if self.k < 1:
            raise TcmError(f"k must be >= 1, got {self.k}")


@dataclass(frozen=True)
class ClassPValues:
    """Per-class p-values for one query; each lies in [1/(l+1), 1]."""

    p: tuple[float, ...]


@dataclass(frozen=True)
class Prediction:
    """Predicted class with its confidence and credibility."""

    label: int
    confidence: float
    credibility: float


@dataclass(frozen=True)
class StrangenessCache:
    """Per-training-example sorted nearest lists and base strangeness.

    ``same_dist``/``other_dist`` are (l, k) ascending with +inf padding;
    ``same_len``/``other_len`` give the number of real entries (short only
    when a class has fewer than k other members).  ``alpha_base`` is the
    strangeness of each training example within the training set alone.
    """

    k: int
    spec: DistanceSpec
    fingerprint: str
    labels: np.ndarray
    C: int
    same_dist: np.ndarray
    same_len: np.ndarray
    same_sum: np.ndarray
    other_dist: np.ndarray
    other_len: np.ndarray
    other_sum: np.ndarray
    alpha_base: np.ndarray

    @property
    def l(self) -> int:
        return len(self.labels)


def alpha_from_sums(same_sum: float, other_sum: float) -> float:
    """Strangeness ratio with the degenerate rules 0/x -> 0, x/0 -> +inf,
    0/0 -> 1."""
    if same_sum < 0 or other_sum < 0:
        raise TcmError("distance sums cannot be negative")
    return alpha_ratio(same_sum, other_sum)


def p_value(alphas, alpha_new: float) -> float:
    """Fraction of the l+1 strangeness values at least as large as the query's
    (the query counts itself; +inf >= +inf holds)."""
    a = np.asarray(alphas, dtype=np.float64)
    return (1 + int(np.count_nonzero(a >= alpha_new))) / (len(a) + 1)


def fingerprint(train: DataSet, config: TcmConfig) -> str:
    """64-bit hex fingerprint binding a cache to (training data, k, spec)."""
    h = hashlib.blake2b(digest_size=8)
    X = train.features_matrix()
    y = train.labels_array()
    h.update(np.int64(train.l).tobytes())
    h.update(np.int64(train.n).tobytes())
    h.update(np.int64(train.C).tobytes())
    h.update(np.ascontiguousarray(X, dtype="<f8").tobytes())
    h.update(np.ascontiguousarray(y, dtype="<i8").tobytes())
    h.update(np.int64(config.k).tobytes())
    h.update(config.spec.text().encode("utf-8"))
    return h.hexdigest()


def _validate_k(train: DataSet, k: int):
    counts = train.class_counts()
    for j, cnt in enumerate(counts):
        if cnt == 0:
            raise TcmError(f"class {j} has no training examples")
    smallest = min(counts)
    if k > smallest:
        raise TcmError(
            f"k={k} exceeds the smallest class size {smallest}; "
            f"the smallest class bounds k"
        )


def build_cache(train: DataSet, config: TcmConfig) -> StrangenessCache:
    """Compute and store each training example's k nearest same-class and
    other-class distances plus its base strangeness."""
    if not train.classes_known:
        raise TcmError("training data must be labeled")
    _validate_k(train, config.k)
    X = train.features_matrix()
    y = train.labels_array()
    D = pairwise_matrix(X, config.spec)
    _, s_dist, s_len, _, o_dist, o_len = neighbor_lists(D, y, config.k)
    s_sum = ascending_sums(s_dist, s_len)
    o_sum = ascending_sums(o_dist, o_len)
    alpha = np.array([alpha_ratio(s, o) for s, o in zip(s_sum, o_sum)])
    return StrangenessCache(
        k=config.k, spec=config.spec, fingerprint=fingerprint(train, config),
        labels=y, C=train.C,
        same_dist=s_dist, same_len=s_len, same_sum=s_sum,
        other_dist=o_dist, other_len=o_len, other_sum=o_sum,
        alpha_base=alpha,
    )


def pvalues_for_distances(cache: StrangenessCache, dist: np.ndarray) -> np.ndarray:
    """Per-class p-values for a query given its distances to every training
    example.  Pure with respect to the cache."""
    return _backend.active().classify_pvalues(
        cache.labels, cache.C, cache.k,
        cache.same_dist, cache.same_len, cache.same_sum,
        cache.other_dist, cache.other_len, cache.other_sum,
        cache.alpha_base, np.ascontiguousarray(dist, dtype=np.float64),
    )


def prediction_from_pvalues(p: ClassPValues) -> Prediction:
    """Largest p-value names the class (ties to the lowest index); confidence
    is 1 minus the second largest; credibility is the largest."""
    values = np.asarray(p.p, dtype=np.float64)
    if len(values) < 2:
        raise TcmError("prediction needs at least two classes")
    label = int(np.argmax(values))
    top_two = np.sort(values)[::-1][:2]
    return Prediction(label=label,
                      confidence=float(1.0 - top_two[1]),
                      credibility=float(top_two[0]))


def classify(train: DataSet, cache: StrangenessCache, config: TcmConfig,
             x) -> tuple[Prediction, ClassPValues]:
    """Classify one query point against the cached training set."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (train.n,):
        raise TcmError(f"query has shape {x.shape}, expected ({train.n},)")
    if cache.k != config.k or cache.spec != config.spec:
        raise CacheMismatchError("cache was built for a different configuration")
    if cache.fingerprint != fingerprint(train, config):
        raise CacheMismatchError(
            "cache fingerprint does not match this training set and configuration"
        )
    dist = distances_to_point(train.features_matrix(), x, config.spec)
    p = pvalues_for_distances(cache, dist)
    pv = ClassPValues(tuple(float(v) for v in p))
    return prediction_from_pvalues(pv), pv


def loo_pvalues(data: DataSet, config: TcmConfig) -> np.ndarray:
    """(l, C) p-values from classifying each example against all the others.

    Row i equals what ``classify`` would report for example i against the
    dataset with example i removed.
    """
    if not data.classes_known:
        raise TcmError("leave-one-out needs labels")
    y = data.labels_array()
    _validate_k(data, config.k)
    X = data.features_matrix()
    D = pairwise_matrix(X, config.spec)
    return _backend.active().loo_pvalues(D, y, data.C, config.k)


_LIST_SEP = ","
_FIELD_SEP = ";"


def serialize_cache(cache: StrangenessCache) -> bytes:
    """Textual cache file: header (version, k, metric, fingerprint), then one
    line per training example with its label and both ascending lists."""
    lines = [
        "TCMNN-CACHE v1",
        f"k={cache.k}",
        f"metric={cache.spec.text()}",
        f"fingerprint={cache.fingerprint}",
    ]
    for t in range(cache.l):
        same = _LIST_SEP.join(repr(float(v)) for v in
                              cache.same_dist[t, :cache.same_len[t]])
        other = _LIST_SEP.join(repr(float(v)) for v in
                               cache.other_dist[t, :cache.other_len[t]])
        lines.append(f"{int(cache.labels[t])}{_FIELD_SEP}{same}{_FIELD_SEP}{other}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def deserialize_cache(data: bytes | str, train: DataSet,
                      config: TcmConfig) -> StrangenessCache:
    """Load a cache file, refusing it unless its fingerprint matches the given
    training set and configuration."""
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    lines = text.replace("\r\n", "\n").split("\n")
    while lines and lines[-1] == "":
        lines.pop()
    if len(lines) < 4 or lines[0] != "TCMNN-CACHE v1":
        raise TcmError("not a TCMNN-CACHE v1 file")
    try:
        k = int(lines[1].removeprefix("k="))
        spec = DistanceSpec.parse(lines[2].removeprefix("metric="))
        fp = lines[3].removeprefix("fingerprint=")
    except ValueError as exc:
        raise TcmError(f"malformed cache header: {exc}") from None
    if k != config.k or spec != config.spec:
        raise CacheMismatchError(
            f"cache holds k={k}, metric={spec.text()}; "
            f"requested k={config.k}, metric={config.spec.text()}"
        )
    expected = fingerprint(train, config)
    if fp != expected:
        raise CacheMismatchError(
            f"cache fingerprint {fp} does not match training data "
            f"(expected {expected}); refusing to load"
        )
    body = lines[4:]
    if len(body) != train.l:
        raise TcmError(f"cache has {len(body)} example lines, expected {train.l}")

    l = train.l
    same_dist = np.full((l, k), INF)
    other_dist = np.full((l, k), INF)
    same_len = np.zeros(l, dtype=np.int64)
    other_len = np.zeros(l, dtype=np.int64)
    labels = np.zeros(l, dtype=np.int64)
    for t, line in enumerate(body):
        parts = line.split(_FIELD_SEP)
        if len(parts) != 3:
            raise TcmError(f"malformed cache line {t + 5}")
        labels[t] = int(parts[0])
        for target, lengths, seg in ((same_dist, same_len, parts[1]),
                                     (other_dist, other_len, parts[2])):
            if seg:
                vals = [float(v) for v in seg.split(_LIST_SEP)]
                if len(vals) > k:
                    raise TcmError(f"cache line {t + 5} lists more than k distances")
                target[t, :len(vals)] = vals
                lengths[t] = len(vals)
    if not np.array_equal(labels, train.labels_array()):
        raise CacheMismatchError("cache labels disagree with the training data")
    same_sum = ascending_sums(same_dist, same_len)
    other_sum = ascending_sums(other_dist, other_len)
    alpha = np.array([alpha_ratio(s, o) for s, o in zip(same_sum, other_sum)])
    return StrangenessCache(
        k=k, spec=spec, fingerprint=fp, labels=labels, C=train.C,
        same_dist=same_dist, same_len=same_len, same_sum=same_sum,
        other_dist=other_dist, other_len=other_len, other_sum=other_sum,
        alpha_base=alpha,
    )
