"""Grid evaluation behind the decision-surface explorer: a small labeled
point set in the unit square is turned into a training set, and the TCM
classifies the center of every cell of a w x h grid.

Rows are top-to-bottom: cell (row, col) is sampled at
x = (col + 0.5) / w, y = (row + 0.5) / h with y growing downward, matching
canvas pixel coordinates.  Centers (not corners) are used so changing the
resolution never lands a sample exactly on a training point unless the user
placed one there.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .datamodel import DataSet, LabeledExample, default_class_names
from .distance import DistanceSpec, distances_to_point
from . import tcm as tcm_mod
from .tcm import TcmConfig, TcmError

MAX_RESOLUTION = 512


class GridError(ValueError):
    """Validation or evaluation failure with a machine-readable code."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code
        self.message = message


@dataclass(frozen=True)
class GridPoint:
    x: float
    y: float
    label: int


@dataclass(frozen=True)
class GridRequest:
    points: tuple[GridPoint, ...]
    k: int
    metric: str
    width: int
    height: int


@dataclass(frozen=True)
class GridCell:
    label: int
    confidence: float
    credibility: float


@dataclass(frozen=True)
class GridResponse:
    """h rows x w columns of predictions, row 0 at the top."""

    cells: tuple[tuple[GridCell, ...], ...]


def request_from_dict(body: dict) -> GridRequest:
    """Parse and structurally validate the wire form of a grid request."""
    try:
        raw_points = body["points"]
        config = body["config"]
        resolution = body["resolution"]
        points = tuple(
            GridPoint(float(p["x"]), float(p["y"]), int(p["label"]))
            for p in raw_points
        )
        k = int(config["k"])
        metric = str(config["metric"])
        w = int(resolution["w"])
        h = int(resolution["h"])
    except (KeyError, TypeError, ValueError) as exc:
        raise GridError("bad_request", f"malformed grid request: {exc}") from None
    return GridRequest(points=points, k=k, metric=metric, width=w, height=h)


def _training_set(points: tuple[GridPoint, ...]) -> DataSet:
    if not points:
        raise GridError("empty_class", "no training points supplied")
    for p in points:
        if not (0.0 <= p.x <= 1.0 and 0.0 <= p.y <= 1.0):
            raise GridError("bad_request",
                            f"point ({p.x}, {p.y}) outside the unit square")
        if p.label < 0:
            raise GridError("bad_request", f"negative label {p.label}")
    C = max(p.label for p in points) + 1
    if C < 2:
        raise GridError("empty_class", "need points of at least two classes")
    counts = [0] * C
    for p in points:
        counts[p.label] += 1
    for j, cnt in enumerate(counts):
        if cnt == 0:
            raise GridError("empty_class", f"class {j} has no training points")
    examples = tuple(LabeledExample((p.x, p.y), p.label) for p in points)
    return DataSet(name="grid", n=2, C=C, class_names=default_class_names(C),
                   classes_known=True, examples=examples)


def evaluate_grid(req: GridRequest) -> GridResponse:
    """Classify the center of every grid cell against the point set.

    Cells that contain a training point still report the classifier's output
    for the cell center; the UI overlays the point markers.
    """
    if req.width < 1 or req.height < 1:
        raise GridError("bad_request", "resolution must be positive")
    if req.width > MAX_RESOLUTION or req.height > MAX_RESOLUTION:
        raise GridError("resolution_too_large",
                        f"resolution capped at {MAX_RESOLUTION}x{MAX_RESOLUTION}")
    try:
        spec = DistanceSpec.parse(req.metric)
    except ValueError as exc:
        raise GridError("bad_metric", str(exc)) from None

    if req.k < 1:
        raise GridError("bad_request", f"k must be >= 1, got {req.k}")
    train = _training_set(req.points)
    config = TcmConfig(k=req.k, spec=spec)
    try:
        cache = tcm_mod.build_cache(train, config)
    except TcmError as exc:
        raise GridError("k_too_large", str(exc)) from None

    X = train.features_matrix()
    rows = []
    for r in range(req.height):
        y = (r + 0.5) / req.height
        row = []
        for ci in range(req.width):
            x = (ci + 0.5) / req.width
            dist = distances_to_point(X, np.array([x, y]), spec)
            p = tcm_mod.pvalues_for_distances(cache, dist)
            pred = tcm_mod.prediction_from_pvalues(
                tcm_mod.ClassPValues(tuple(float(v) for v in p)))
            row.append(GridCell(pred.label, pred.confidence, pred.credibility))
        rows.append(tuple(row))
    return GridResponse(cells=tuple(rows))


def response_to_dict(resp: GridResponse) -> dict:
    return {
        "cells": [
            [{"label": c.label, "confidence": c.confidence,
              "credibility": c.credibility} for c in row]
            for row in resp.cells
        ]
    }
