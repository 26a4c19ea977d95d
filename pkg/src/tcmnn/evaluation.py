"""Test harness and statistics: leave-one-out / separate / random-split runs
for the TCM and the plain nearest-neighbour baselines, accuracy and confusion
summaries, significance marking, histograms, the paired t statistic, and the
risk-of-malignancy index.

Percentages follow the reporting conventions of the original system: overall
accuracy is correct/total, per-class accuracy is per-class correct/members,
and each confusion row spreads one true class's misclassified examples over
the predicted classes.  Statistics that would divide by zero (no classified
examples, an empty class) are reported as absent (None), never as 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import tcm as tcm_mod
from .datamodel import DataSet, random_split, SplitSpec
from .distance import DistanceSpec, pairwise_matrix, distances_to_point
from .tcm import ClassPValues, TcmConfig, prediction_from_pvalues


class EvalError(ValueError):
    """Raised for invalid evaluation inputs."""


class ZeroVarianceError(EvalError):
    """All paired differences equal: the t statistic's denominator is zero."""


@dataclass(frozen=True)
class BaselineConfig:
    """A plain nearest-neighbour run: majority vote or distance weighted."""

    algorithm: str  # "knn" | "dwknn"
    k: int = 1
    spec: DistanceSpec = DistanceSpec.euclidean()

    def __post_init__(self):
        if self.algorithm not in ("knn", "dwknn"):
            raise EvalError(f"unknown baseline algorithm {self.algorithm!r}")
        if self.k < 1:
            raise EvalError("k must be >= 1")


@dataclass(frozen=True)
class ExampleResult:
    """Outcome for one test example.  Baseline runs carry no p-values,
    confidence or credibility."""

    index: int
    true_label: int | None
    predicted: int
    confidence: float | None = None
    credibility: float | None = None
    p_values: tuple[float, ...] | None = None
    features: tuple[float, ...] | None = None


@dataclass(frozen=True)
class EvalRun:
    """All per-example results of one evaluation, in test-set order."""

    mode: str
    algorithm: str
    k: int
    metric: str
    train_name: str
    test_name: str
    train_count: int
    C: int
    class_names: tuple[str, ...]
    results: tuple[ExampleResult, ...]

    @property
    def test_count(self) -> int:
        return len(self.results)


@dataclass(frozen=True)
class Statistics:
    """Aggregate percentages for a run; absent values are None."""

    total: int
    classified: int
    not_classified_pct: float
    overall_accuracy: float | None
    class_accuracy: tuple[float | None, ...]
    confusion: tuple[tuple[float, ...] | None, ...]
    avg_confidence: float | None
    avg_credibility: float | None
    sensitivity: float | None
    false_positive_rate: float | None
    histogram_interval: int
    confidence_histogram: tuple[float, ...] | None
    credibility_histogram: tuple[float, ...] | None
    significance_threshold: float | None


@dataclass(frozen=True)
class TTestResult:
    """Paired two-tailed t statistic (no table lookup)."""

    n: int
    sum_d: float
    sum_d2: float
    t: float

    @property
    def df(self) -> int:
        return self.n - 1


@dataclass(frozen=True)
class RmiResult:
    """Risk-of-malignancy index: the product of the three clinical scores,
    flagged at-risk above 200."""

    score: float
    at_risk: bool


def _tcm_result(i: int, true_label, p: np.ndarray, features,
                echo: bool) -> ExampleResult:
    pv = ClassPValues(tuple(float(v) for v in p))
    pred = prediction_from_pvalues(pv)
    return ExampleResult(
        index=i, true_label=true_label, predicted=pred.label,
        confidence=pred.confidence, credibility=pred.credibility,
        p_values=pv.p, features=tuple(features) if echo else None,
    )


def leave_one_out(data: DataSet, config: TcmConfig | BaselineConfig, *,
                  attr_echo: bool = True) -> EvalRun:
    """Classify each example against all the others."""
    if not data.classes_known:
        raise EvalError("leave-one-out needs a labeled dataset")
    if data.l < 2:
        raise EvalError("leave-one-out needs at least two examples")
    y = data.labels_array()
    X = data.features_matrix()
    results = []
    if isinstance(config, TcmConfig):
        P = tcm_mod.loo_pvalues(data, config)
        for i in range(data.l):
            results.append(_tcm_result(i, int(y[i]), P[i], X[i], attr_echo))
        algorithm = "tcm"
    else:
        D = pairwise_matrix(X, config.spec)
        if config.k > data.l - 1:
            raise EvalError(f"k={config.k} exceeds the {data.l - 1} available "
                            f"training examples under leave-one-out")
        for i in range(data.l):
            others = np.concatenate([np.arange(i), np.arange(i + 1, data.l)])
            pred = _baseline_predict(D[i, others], y[others], data.C, config)
            results.append(ExampleResult(
                index=i, true_label=int(y[i]), predicted=pred,
                features=tuple(X[i]) if attr_echo else None))
        algorithm = config.algorithm
    return EvalRun(mode="leave-one-out", algorithm=algorithm,
                   k=config.k, metric=config.spec.text(),
                   train_name=data.name, test_name=data.name,
                   train_count=data.l, C=data.C, class_names=data.class_names,
                   results=tuple(results))


def _baseline_predict(dist: np.ndarray, labels: np.ndarray, C: int,
                      config: BaselineConfig) -> int:
    order = np.argsort(dist, kind="stable")[:config.k]
    nn_labels = labels[order]
    nn_dist = dist[order]
    if config.algorithm == "knn":
        return int(np.argmax(np.bincount(nn_labels, minlength=C)))
    zero = nn_dist == 0.0
    if zero.any():
        return int(np.argmax(np.bincount(nn_labels[zero], minlength=C)))
    scores = np.zeros(C)
    for lab, d in zip(nn_labels, nn_dist):
        scores[lab] += 1.0 / d
    return int(np.argmax(scores))


def separate_test(train: DataSet, test: DataSet,
                  config: TcmConfig | BaselineConfig, *,
                  attr_echo: bool = True,
                  cache: "tcm_mod.StrangenessCache | None" = None) -> EvalRun:
    """Classify every test example against the full training set.  For the
    TCM the strangeness cache is built (or validated) once up front."""
    if not train.classes_known:
        raise EvalError("training data must be labeled")
    if train.n != test.n:
        raise EvalError(f"attribute counts differ: train {train.n}, test {test.n}")
    if test.classes_known and test.C > train.C:
        raise EvalError(f"test set uses {test.C} classes, train only {train.C}")
    X = train.features_matrix()
    y_test = test.labels_array() if test.classes_known else None
    results = []
    if isinstance(config, TcmConfig):
        if cache is None:
            cache = tcm_mod.build_cache(train, config)
        else:
            if cache.fingerprint != tcm_mod.fingerprint(train, config):
                raise tcm_mod.CacheMismatchError(
                    "supplied cache does not match the training set")
        for i, ex in enumerate(test.examples):
            dist = distances_to_point(X, np.asarray(ex.features), config.spec)
            p = tcm_mod.pvalues_for_distances(cache, dist)
            true = int(y_test[i]) if y_test is not None else None
            results.append(_tcm_result(i, true, p, ex.features, attr_echo))
        algorithm = "tcm"
    else:
        if 0 in train.class_counts():
            empty = train.class_counts().index(0)
            raise EvalError(f"class {empty} has no training examples")
        if config.k > train.l:
            raise EvalError(f"k={config.k} exceeds the training size {train.l}")
        y_train = train.labels_array()
        for i, ex in enumerate(test.examples):
            dist = distances_to_point(X, np.asarray(ex.features), config.spec)
            pred = _baseline_predict(dist, y_train, train.C, config)
            true = int(y_test[i]) if y_test is not None else None
            results.append(ExampleResult(
                index=i, true_label=true, predicted=pred,
                features=tuple(ex.features) if attr_echo else None))
        algorithm = config.algorithm
    return EvalRun(mode="separate", algorithm=algorithm,
                   k=config.k, metric=config.spec.text(),
                   train_name=train.name, test_name=test.name,
                   train_count=train.l, C=train.C, class_names=train.class_names,
                   results=tuple(results))


def random_split_test(data: DataSet, split: SplitSpec,
                      config: TcmConfig | BaselineConfig, *,
                      attr_echo: bool = True) -> EvalRun:
    """Random-split mode: split once, then run a separate test."""
    train, test = random_split(data, split)
    run = separate_test(train, test, config, attr_echo=attr_echo)
    return replace(run, mode="random-split")


def histogram(values, interval: int = 10) -> tuple[float, ...]:
    """Percentage of values per interval bin over [0, 1]; the last bin is
    closed above so 1.0 lands in it.  Fractions sum to 100."""
    if interval < 1 or 100 % interval != 0:
        raise EvalError(f"histogram interval must divide 100, got {interval}")
    vals = np.asarray(list(values), dtype=np.float64)
    if len(vals) == 0:
        raise EvalError("cannot histogram an empty value list")
    if vals.min() < 0 or vals.max() > 1:
        raise EvalError("histogram values must lie in [0, 1]")
    nbins = 100 // interval
    bins = np.minimum((vals * 100 / interval).astype(np.int64), nbins - 1)
    counts = np.bincount(bins, minlength=nbins)
    return tuple(float(c) / len(vals) * 100.0 for c in counts)


def _statistics(run: EvalRun, r: float | None, interval: int,
                positive_class: int | None) -> Statistics:
    if any(res.true_label is None for res in run.results):
        raise EvalError("statistics need known true labels")
    total = len(run.results)
    has_credibility = all(res.credibility is not None for res in run.results)
    if r is not None and not has_credibility:
        raise EvalError("significance marking needs credibility values "
                        "(not available for baseline runs)")
    if r is not None and not 0 <= r <= 100:
        raise EvalError(f"significance threshold {r} outside [0, 100]")

    kept = [res for res in run.results
            if r is None or res.credibility * 100.0 >= r]
    classified = len(kept)
    not_classified_pct = (total - classified) / total * 100.0 if total else 0.0

    overall = None
    class_acc: list[float | None] = [None] * run.C
    confusion: list[tuple[float, ...] | None] = [None] * run.C
    if classified:
        correct = sum(1 for res in kept if res.predicted == res.true_label)
        overall = correct / classified * 100.0
        for c in range(run.C):
            members = [res for res in kept if res.true_label == c]
            if not members:
                continue
            good = sum(1 for res in members if res.predicted == c)
            class_acc[c] = good / len(members) * 100.0
            wrong = [res for res in members if res.predicted != c]
            if wrong:
                row = np.zeros(run.C)
                for res in wrong:
                    row[res.predicted] += 1
                confusion[c] = tuple(float(v) / len(wrong) * 100.0 for v in row)

    avg_conf = avg_cred = None
    conf_hist = cred_hist = None
    if total and all(res.confidence is not None for res in run.results):
        avg_conf = float(np.mean([res.confidence for res in run.results])) * 100.0
        conf_hist = histogram([res.confidence for res in run.results], interval)
    if total and has_credibility:
        avg_cred = float(np.mean([res.credibility for res in run.results])) * 100.0
        cred_hist = histogram([res.credibility for res in run.results], interval)

    sensitivity = fpr = None
    if positive_class is not None and run.C == 2:
        if not 0 <= positive_class < 2:
            raise EvalError("positive_class must be 0 or 1")
        negative = 1 - positive_class
        sensitivity = class_acc[positive_class]
        if class_acc[negative] is not None:
            fpr = 100.0 - class_acc[negative]

    return Statistics(
        total=total, classified=classified,
        not_classified_pct=not_classified_pct,
        overall_accuracy=overall,
        class_accuracy=tuple(class_acc),
        confusion=tuple(confusion),
        avg_confidence=avg_conf, avg_credibility=avg_cred,
        sensitivity=sensitivity, false_positive_rate=fpr,
        histogram_interval=interval,
        confidence_histogram=conf_hist, credibility_histogram=cred_hist,
        significance_threshold=r,
    )


def compute_statistics(run: EvalRun, histogram_interval: int = 10,
                       positive_class: int | None = None) -> Statistics:
    """Unfiltered statistics over a labeled run."""
    return _statistics(run, None, histogram_interval, positive_class)


def mark_significance(run: EvalRun, r: float, histogram_interval: int = 10,
                      positive_class: int | None = None) -> Statistics:
    """Statistics with examples of credibility below r% marked not-classified.

    The comparison is strict, so r=0 excludes nothing.  Averages and
    histograms still cover all examples; accuracies cover the remainder.
    """
    return _statistics(run, float(r), histogram_interval, positive_class)


def paired_t_statistic(differences) -> TTestResult:
    """Two-tailed paired t statistic from the per-pair differences:
    t = sum(D) / sqrt((n*sum(D^2) - sum(D)^2) / (n-1)), df = n-1."""
    diffs = [float(d) for d in differences]
    n = len(diffs)
    if n < 2:
        raise EvalError(f"need at least 2 paired differences, got {n}")
    sum_d = 0.0
    sum_d2 = 0.0
    for d in diffs:
        sum_d += d
        sum_d2 += d * d
    denom_sq = (n * sum_d2 - sum_d * sum_d) / (n - 1)
    if denom_sq <= 0.0:
        raise ZeroVarianceError(
            "all paired differences are equal; the t statistic is undefined"
        )
    return TTestResult(n=n, sum_d=sum_d, sum_d2=sum_d2,
                       t=sum_d / math.sqrt(denom_sq))


def rmi_index(menopausal: float, ultrasound: float, ca125: float) -> RmiResult:
    """Product of menopausal status, ultrasound score and CA125 level; a
    score strictly greater than 200 flags risk of malignancy."""
    for name, v in (("menopausal", menopausal), ("ultrasound", ultrasound),
                    ("ca125", ca125)):
        if v < 0:
            raise EvalError(f"{name} score cannot be negative")
    score = float(menopausal) * float(ultrasound) * float(ca125)
    return RmiResult(score=score, at_risk=score > 200.0)
