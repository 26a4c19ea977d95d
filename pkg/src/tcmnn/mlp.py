"""Minimal fully connected feed-forward network with logistic units, trained
by stochastic backpropagation on the squared error.

Used two ways: as a baseline classifier (one output unit per class, 1-of-N
targets, argmax prediction) and as a feature transformer whose hidden-layer
activations replace a dataset's attributes (:func:`augment`).

Determinism: weight initialisation draws from SplitMix64(seed) — per layer,
weight matrix in row-major order, then biases — and the training-example
sequence draws from SplitMix64(seed XOR 0x5DEECE66D), so a (seed, config,
data) triple fully determines the trained network.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .datamodel import DataSet, LabeledExample
from .rng import SplitMix64

_TRAIN_STREAM_XOR = 0x5DEECE66D


class MlpError(ValueError):
    """Raised for invalid network configurations or inputs."""


@dataclass(frozen=True)
class MlpConfig:
    """Architecture and training hyper-parameters.

    ``layer_sizes`` runs input..output, e.g. (3, 5, 2).  ``target_on`` /
    ``target_off`` are the 1-of-N encoding levels; ``per_class_target_on``
    overrides the on-level for chosen classes (biasing training toward them).
    """

    layer_sizes: tuple[int, ...]
    eta: float = 0.1
    init_range: float = 0.05
    weight_decay: float = 0.0
    target_on: float = 0.999
    target_off: float = 0.001
    per_class_target_on: dict[int, float] | None = None
    updates: int = 100_000
    trace_every: int = 20
    seed: int = 0

    def __post_init__(self):
        if len(self.layer_sizes) < 2:
            raise MlpError("need at least input and output layers")
        if any(s < 1 for s in self.layer_sizes):
            raise MlpError("layer sizes must be positive")
        if self.eta <= 0:
            raise MlpError("learning rate must be positive")
        if self.weight_decay < 0:
            raise MlpError("weight decay cannot be negative")
        if self.updates < 0:
            raise MlpError("update count cannot be negative")
        if self.trace_every < 1:
            raise MlpError("trace_every must be positive")


class Mlp:
    """Weights and biases per non-input layer; logistic everywhere."""

    def __init__(self, weights: list[np.ndarray], biases: list[np.ndarray]):
        for i in range(len(weights) - 1):
            if weights[i + 1].shape[1] != weights[i].shape[0]:
                raise MlpError("layer shapes do not chain")
        for W, b in zip(weights, biases):
            if b.shape != (W.shape[0],):
                raise MlpError("bias length must match layer width")
        self.weights = weights
        self.biases = biases

    @property
    def layer_sizes(self) -> tuple[int, ...]:
        return (self.weights[0].shape[1],) + tuple(W.shape[0] for W in self.weights)


def _logistic(z: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-z))


def init(config: MlpConfig) -> Mlp:
    """Fresh network with every weight and bias uniform in +-init_range."""
    gen = SplitMix64(config.seed)
    weights = []
    biases = []
    r = config.init_range
    for fan_in, fan_out in zip(config.layer_sizes, config.layer_sizes[1:]):
        W = np.empty((fan_out, fan_in))
        for i in range(fan_out):
            for j in range(fan_in):
                W[i, j] = gen.next_uniform(-r, r)
        b = np.array([gen.next_uniform(-r, r) for _ in range(fan_out)])
        weights.append(W)
        biases.append(b)
    return Mlp(weights, biases)


def forward(mlp: Mlp, x) -> list[np.ndarray]:
    """All layer activations, input first, output last."""
    a = np.asarray(x, dtype=np.float64)
    if a.shape != (mlp.layer_sizes[0],):
        raise MlpError(f"input has shape {a.shape}, expected ({mlp.layer_sizes[0]},)")
    acts = [a]
    for W, b in zip(mlp.weights, mlp.biases):
        a = _logistic(W @ a + b)
        acts.append(a)
    return acts


def forward_batch(mlp: Mlp, X: np.ndarray) -> list[np.ndarray]:
    """Layer activations for a whole (l, n) matrix at once."""
    A = np.asarray(X, dtype=np.float64)
    acts = [A]
    for W, b in zip(mlp.weights, mlp.biases):
        A = _logistic(A @ W.T + b)
        acts.append(A)
    return acts


def encode_targets(label: int, config: MlpConfig) -> np.ndarray:
    """1-of-N target vector: on-level at the label, off-level elsewhere."""
    C = config.layer_sizes[-1]
    if not 0 <= label < C:
        raise MlpError(f"label {label} outside [0, {C})")
    t = np.full(C, config.target_off)
    on = config.target_on
    if config.per_class_target_on and label in config.per_class_target_on:
        on = config.per_class_target_on[label]
    t[label] = on
    return t


def gradients(mlp: Mlp, x, target) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Gradient of the half squared error 0.5*sum((out - target)^2) for one
    example, by backpropagation through the logistic layers."""
    acts = forward(mlp, x)
    target = np.asarray(target, dtype=np.float64)
    out = acts[-1]
    delta = (out - target) * out * (1.0 - out)
    dWs: list[np.ndarray] = [None] * len(mlp.weights)
    dbs: list[np.ndarray] = [None] * len(mlp.weights)
    for layer in range(len(mlp.weights) - 1, -1, -1):
        dWs[layer] = np.outer(delta, acts[layer])
        dbs[layer] = delta
        if layer > 0:
            prev = acts[layer]
            delta = (mlp.weights[layer].T @ delta) * prev * (1.0 - prev)
    return dWs, dbs


@dataclass(frozen=True)
class TrainingTrace:
    """(update index, training-set sum of squared errors) samples, indices
    strictly increasing."""

    samples: tuple[tuple[int, float], ...] = field(default_factory=tuple)


def sum_squared_errors(mlp: Mlp, X: np.ndarray, T: np.ndarray) -> float:
    """Sum over the whole set of the squared output errors (no 1/2 factor)."""
    out = forward_batch(mlp, X)[-1]
    return float(((out - T) ** 2).sum())


def train_stochastic(mlp: Mlp, train: DataSet, config: MlpConfig) -> TrainingTrace:
    """Run ``config.updates`` single-example updates, drawing the example
    uniformly at random each time, stepping against the squared-error gradient
    and then shrinking all parameters by (1 - weight_decay).

    Mutates ``mlp`` in place and returns the SSE trace (sampled before any
    update and after every ``trace_every``-th one).
    """
    if train.l == 0:
        raise MlpError("cannot train on an empty dataset")
    if train.n != mlp.layer_sizes[0]:
        raise MlpError(f"dataset has {train.n} attributes, network expects "
                       f"{mlp.layer_sizes[0]}")
    X = train.features_matrix()
    y = train.labels_array()
    T = np.stack([encode_targets(int(lab), config) for lab in y])
    gen = SplitMix64(config.seed ^ _TRAIN_STREAM_XOR)
    shrink = 1.0 - config.weight_decay
    samples = [(0, sum_squared_errors(mlp, X, T))]
    for step in range(1, config.updates + 1):
        idx = gen.next_below(train.l)
        dWs, dbs = gradients(mlp, X[idx], T[idx])
        for layer in range(len(mlp.weights)):
            mlp.weights[layer] -= config.eta * dWs[layer]
            mlp.biases[layer] -= config.eta * dbs[layer]
            if shrink != 1.0:
                mlp.weights[layer] *= shrink
                mlp.biases[layer] *= shrink
        if step % config.trace_every == 0 or step == config.updates:
            samples.append((step, sum_squared_errors(mlp, X, T)))
    return TrainingTrace(tuple(samples))


def predict_class(mlp: Mlp, x) -> int:
    """Index of the largest output unit (ties to the lowest index)."""
    return int(np.argmax(forward(mlp, x)[-1]))


def augment(mlp: Mlp, data: DataSet, hidden_index: int) -> DataSet:
    """Replace every example's features with the activations of one hidden
    layer; labels and class metadata are preserved, attributes renamed
    H0..H(m-1)."""
    hidden_count = len(mlp.layer_sizes) - 2
    if not 0 <= hidden_index < hidden_count:
        raise MlpError(
            f"hidden layer index {hidden_index} outside [0, {hidden_count})"
        )
    if data.n != mlp.layer_sizes[0]:
        raise MlpError(f"dataset has {data.n} attributes, network expects "
                       f"{mlp.layer_sizes[0]}")
    acts = forward_batch(mlp, data.features_matrix())[hidden_index + 1]
    m = acts.shape[1]
    examples = [
        LabeledExample(tuple(row), ex.label, ex.display_id)
        for row, ex in zip(acts, data.examples)
    ]
    return DataSet(
        name=f"{data.name}-augmented",
        n=m, C=data.C, class_names=data.class_names,
        classes_known=data.classes_known, examples=tuple(examples),
        attribute_names=tuple(f"H{i}" for i in range(m)),
        output_name=data.output_name,
    )


def serialize_weights(mlp: Mlp) -> bytes:
    """Textual weight file: version line, layer sizes, then each layer's
    weight rows and bias line with round-trip precision."""
    lines = ["MLP v1", ",".join(str(s) for s in mlp.layer_sizes)]
    for W, b in zip(mlp.weights, mlp.biases):
        for row in W:
            lines.append("\t".join(repr(float(v)) for v in row))
        lines.append("\t".join(repr(float(v)) for v in b))
    return ("\n".join(lines) + "\n").encode("utf-8")


def deserialize_weights(data: bytes | str) -> Mlp:
    """Load a weight file written by :func:`serialize_weights`."""
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    lines = text.replace("\r\n", "\n").split("\n")
    while lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0] != "MLP v1":
        raise MlpError("not an MLP v1 weight file")
    try:
        sizes = tuple(int(s) for s in lines[1].split(","))
    except (IndexError, ValueError):
        raise MlpError("malformed layer-size line") from None
    if len(sizes) < 2 or any(s < 1 for s in sizes):
        raise MlpError("invalid layer sizes")
    pos = 2
    weights = []
    biases = []
    for fan_in, fan_out in zip(sizes, sizes[1:]):
        need = fan_out + 1
        if pos + need > len(lines):
            raise MlpError("weight file truncated")
        rows = []
        for r in range(fan_out):
            vals = [float(v) for v in lines[pos + r].split("\t")]
            if len(vals) != fan_in:
                raise MlpError(f"weight row {pos + r + 1} has {len(vals)} values, "
                               f"expected {fan_in}")
            rows.append(vals)
        bias = [float(v) for v in lines[pos + fan_out].split("\t")]
        if len(bias) != fan_out:
            raise MlpError("bias row length mismatch")
        weights.append(np.array(rows))
        biases.append(np.array(bias))
        pos += need
    if pos != len(lines):
        raise MlpError("trailing content in weight file")
    return Mlp(weights, biases)
