"""Dataset representation, the two dataset file formats, splitting and scaling.

Two formats are supported:

* a plain delimited text table (optional name header, one example per line,
  trailing integer class column when labels are known), and
* the tagged ``.data`` format, whose header carries the example/attribute/class
  counts, class names and flags in a fixed tag order, followed by the same
  table body.

All types are immutable after construction; every operation returns new
objects and can be called concurrently on shared data.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .rng import SplitMix64


class DataError(ValueError):
    """Raised for malformed dataset content or format violations."""


@dataclass(frozen=True)
class LabeledExample:
    """One example: a feature vector plus an optional class index."""

    features: tuple[float, ...]
    label: int | None = None
    display_id: str | None = None


@dataclass(frozen=True)
class DataSet:
    """An ordered collection of examples sharing one schema.

    ``n`` is the attribute count, ``C`` the class count; ``classes_known``
    states whether every example carries a label.  ``output_name`` is the
    optional title of the class column (the last entry of a text-table
    header row).
    """

    name: str
    n: int
    C: int
    class_names: tuple[str, ...]
    classes_known: bool
    examples: tuple[LabeledExample, ...]
    attribute_names: tuple[str, ...] | None = None
    output_name: str | None = None

    def __post_init__(self):
        if self.n < 1:
            raise DataError("attribute count must be >= 1")
        if self.C < 1:
            raise DataError("class count must be >= 1")
        if len(self.class_names) != self.C:
            raise DataError(
                f"expected {self.C} class names, got {len(self.class_names)}"
            )
        if self.attribute_names is not None and len(self.attribute_names) != self.n:
            raise DataError(
                f"expected {self.n} attribute names, got {len(self.attribute_names)}"
            )
        for i, ex in enumerate(self.examples):
            if len(ex.features) != self.n:
                raise DataError(f"example {i} has {len(ex.features)} features, expected {self.n}")
            if self.classes_known:
                if ex.label is None:
                    raise DataError(f"example {i} is unlabeled but classes are declared known")
                if not 0 <= ex.label < self.C:
                    raise DataError(f"example {i} label {ex.label} outside [0, {self.C})")

    @property
    def l(self) -> int:
        return len(self.examples)

    def features_matrix(self) -> np.ndarray:
        """(l, n) float64 matrix of the feature vectors."""
        if not self.examples:
            return np.empty((0, self.n), dtype=np.float64)
        return np.array([ex.features for ex in self.examples], dtype=np.float64)

    def labels_array(self) -> np.ndarray:
        """(l,) int64 array of labels; requires classes_known."""
        if not self.classes_known:
            raise DataError(f"dataset {self.name!r} has no labels")
        return np.array([ex.label for ex in self.examples], dtype=np.int64)

    def class_counts(self) -> list[int]:
        counts = [0] * self.C
        if self.classes_known:
            for ex in self.examples:
                counts[ex.label] += 1
        return counts

    def replace_examples(self, examples: Sequence[LabeledExample], name: str | None = None,
                         attribute_names: Sequence[str] | None = None) -> "DataSet":
        return DataSet(
            name=self.name if name is None else name,
            n=len(examples[0].features) if examples else self.n,
            C=self.C,
            class_names=self.class_names,
            classes_known=self.classes_known,
            examples=tuple(examples),
            attribute_names=(self.attribute_names if attribute_names is None
                             else tuple(attribute_names)),
            output_name=self.output_name,
        )


@dataclass(frozen=True)
class SplitSpec:
    """How to split one dataset into train and test parts."""

    test_count: int
    seed: int = 0

    def __post_init__(self):
        if self.test_count < 1:
            raise DataError("test_count must be >= 1")


def _parse_number(text: str, row: int, col: int) -> float:
    try:
        return float(text)
    except ValueError:
        raise DataError(f"non-numeric attribute {text!r} at row {row}, column {col}") from None


def _parse_label(text: str, row: int) -> int:
    try:
        value = int(text)
    except ValueError:
        raise DataError(f"non-integer class label {text!r} at row {row}") from None
    if value < 0:
        raise DataError(f"negative class label {value} at row {row}")
    return value


def default_class_names(C: int) -> tuple[str, ...]:
    return tuple(f"Class{j}" for j in range(C))


def parse_text_table(raw: str, delimiter: str = "\t", has_header: bool = False,
                     classes_known: bool = True, *, name: str = "",
                     class_names: Sequence[str] | None = None,
                     class_count: int | None = None) -> DataSet:
    """Parse a delimited text table into a DataSet.

    Each data line holds the attribute values followed, when ``classes_known``,
    by one trailing integer class label.  The optional header line names the
    attributes; with labels present it may carry one extra final field naming
    the output column.  ``class_count`` overrides the inferred class count
    (max label + 1); ``class_names`` overrides the generated names.
    """
    if len(delimiter) != 1:
        raise DataError("delimiter must be a single character")
    lines = raw.replace("\r\n", "\n").split("\n")
    while lines and lines[-1].strip() == "":
        lines.pop()
    if not lines:
        raise DataError("empty input")

    header_fields: list[str] | None = None
    if has_header:
        header_fields = [f.strip() for f in lines[0].split(delimiter)]
        lines = lines[1:]
        if not lines:
            raise DataError("no data rows after header")

    width = None
    examples = []
    for r, line in enumerate(lines, start=1):
        fields = [f.strip() for f in line.split(delimiter)]
        if width is None:
            width = len(fields)
            if width < (2 if classes_known else 1):
                raise DataError(f"row {r} has too few fields")
        elif len(fields) != width:
            raise DataError(f"ragged row {r}: {len(fields)} fields, expected {width}")
        if classes_known:
            feats = tuple(_parse_number(f, r, c + 1) for c, f in enumerate(fields[:-1]))
            label = _parse_label(fields[-1], r)
        else:
            feats = tuple(_parse_number(f, r, c + 1) for c, f in enumerate(fields))
            label = None
        examples.append(LabeledExample(feats, label))

    n = width - 1 if classes_known else width

    attribute_names = None
    output_name = None
    if header_fields is not None:
        if classes_known and len(header_fields) == n + 1:
            attribute_names = tuple(header_fields[:-1])
            output_name = header_fields[-1]
        elif len(header_fields) == n:
            attribute_names = tuple(header_fields)
        else:
            raise DataError(
                f"header has {len(header_fields)} names but rows have {n} attributes"
            )

    if classes_known:
        max_label = max(ex.label for ex in examples)
        C = class_count if class_count is not None else max_label + 1
        if max_label >= C:
            raise DataError(f"label {max_label} outside [0, {C})")
    else:
        C = class_count if class_count is not None else 1

    names = tuple(class_names) if class_names is not None else default_class_names(C)
    return DataSet(name=name, n=n, C=C, class_names=names, classes_known=classes_known,
                   examples=tuple(examples), attribute_names=attribute_names,
                   output_name=output_name)


_TAG_ORDER = (
    "[NUMBER_OF_EXAMPLES]",
    "[NUMBER_OF_ATTRIBUTES]",
    "[NUMBER_OF_CLASSES]",
    "[PRESENCE_OF_CLASSES]",
    "[CLASS_NAMES]",
    "[IMAGE_FILE]",
    "[PRESENCE_OF_ATTRIBUTE_NAMES]",
)


def _parse_bool(text: str, tag: str) -> bool:
    if text == "true":
        return True
    if text == "false":
        return False
    raise DataError(f"{tag} value must be 'true' or 'false', got {text!r}")


def read_data_file(data: bytes | str, name: str = "") -> DataSet:
    """Read the tagged ``.data`` format.

    The seven header tags must appear exactly once, in the fixed order, each
    followed by its value line.  Every header count is cross-checked against
    the body.  Image data files are recognised and rejected.
    """
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    lines = text.replace("\r\n", "\n").split("\n")
    while lines and lines[-1].strip() == "":
        lines.pop()

    if len(lines) < 2 * len(_TAG_ORDER):
        raise DataError("truncated .data header")
    values = {}
    for i, tag in enumerate(_TAG_ORDER):
        tag_line = lines[2 * i]
        if tag_line != tag:
            raise DataError(f"expected tag {tag} on line {2 * i + 1}, found {tag_line!r}")
        values[tag] = lines[2 * i + 1]
    body = lines[2 * len(_TAG_ORDER):]

    if _parse_bool(values["[IMAGE_FILE]"], "[IMAGE_FILE]"):
        raise DataError("image data files are out of scope")

    try:
        declared_l = int(values["[NUMBER_OF_EXAMPLES]"])
        declared_n = int(values["[NUMBER_OF_ATTRIBUTES]"])
        declared_c = int(values["[NUMBER_OF_CLASSES]"])
    except ValueError:
        raise DataError("non-integer count in .data header") from None
    classes_known = _parse_bool(values["[PRESENCE_OF_CLASSES]"], "[PRESENCE_OF_CLASSES]")
    has_names = _parse_bool(values["[PRESENCE_OF_ATTRIBUTE_NAMES]"],
                            "[PRESENCE_OF_ATTRIBUTE_NAMES]")
    class_names = tuple(values["[CLASS_NAMES]"].split())
    if len(class_names) != declared_c:
        raise DataError(
            f"[CLASS_NAMES] lists {len(class_names)} names, expected {declared_c}"
        )

    attribute_names = None
    output_name = None
    if has_names:
        if not body:
            raise DataError("attribute names declared present but header row missing")
        header_fields = [f.strip() for f in body[0].split("\t")]
        body = body[1:]
        if classes_known and len(header_fields) == declared_n + 1:
            attribute_names = tuple(header_fields[:-1])
            output_name = header_fields[-1]
        elif len(header_fields) == declared_n:
            attribute_names = tuple(header_fields)
        else:
            raise DataError(
                f"attribute header row has {len(header_fields)} names, expected {declared_n}"
            )

    if len(body) != declared_l:
        raise DataError(
            f"example-count mismatch: header declares {declared_l}, body has {len(body)} rows"
        )

    expected_width = declared_n + (1 if classes_known else 0)
    examples = []
    for r, line in enumerate(body, start=1):
        fields = [f.strip() for f in line.split("\t")]
        if len(fields) != expected_width:
            raise DataError(
                f"row {r} has {len(fields)} fields, expected {expected_width}"
            )
        if classes_known:
            feats = tuple(_parse_number(f, r, c + 1) for c, f in enumerate(fields[:-1]))
            label = _parse_label(fields[-1], r)
            if label >= declared_c:
                raise DataError(f"row {r} label {label} outside [0, {declared_c})")
        else:
            feats = tuple(_parse_number(f, r, c + 1) for c, f in enumerate(fields))
            label = None
        examples.append(LabeledExample(feats, label))

    return DataSet(name=name, n=declared_n, C=declared_c, class_names=class_names,
                   classes_known=classes_known, examples=tuple(examples),
                   attribute_names=attribute_names, output_name=output_name)


def format_value(x: float) -> str:
    """Shortest decimal representation that round-trips to the same float."""
    return repr(float(x))


def write_data_file(ds: DataSet) -> bytes:
    """Serialise a DataSet to the tagged ``.data`` format (LF line endings)."""
    for cname in ds.class_names:
        if cname == "" or any(ch.isspace() for ch in cname):
            raise DataError(
                f"class name {cname!r} is empty or contains whitespace and cannot be written"
            )
    out = [
        "[NUMBER_OF_EXAMPLES]", str(ds.l),
        "[NUMBER_OF_ATTRIBUTES]", str(ds.n),
        "[NUMBER_OF_CLASSES]", str(ds.C),
        "[PRESENCE_OF_CLASSES]", "true" if ds.classes_known else "false",
        "[CLASS_NAMES]", "\t".join(ds.class_names),
        "[IMAGE_FILE]", "false",
        "[PRESENCE_OF_ATTRIBUTE_NAMES]", "true" if ds.attribute_names is not None else "false",
    ]
    if ds.attribute_names is not None:
        for aname in ds.attribute_names:
            if "\t" in aname:
                raise DataError(f"attribute name {aname!r} contains the delimiter")
        header = list(ds.attribute_names)
        if ds.classes_known and ds.output_name is not None:
            header.append(ds.output_name)
        out.append("\t".join(header))
    for ex in ds.examples:
        fields = [format_value(v) for v in ex.features]
        if ds.classes_known:
            fields.append(str(ex.label))
        out.append("\t".join(fields))
    return ("\n".join(out) + "\n").encode("utf-8")


def random_split(ds: DataSet, spec: SplitSpec) -> tuple[DataSet, DataSet]:
    """Split into (train, test) by drawing ``test_count`` examples without
    replacement using the seeded generator; both halves keep the original
    relative order.  The same seed always produces the same split."""
    if not ds.classes_known:
        raise DataError("random_split requires a labeled dataset")
    if spec.test_count >= ds.l:
        raise DataError(
            f"test_count {spec.test_count} must be smaller than the dataset size {ds.l}"
        )
    gen = SplitMix64(spec.seed)
    test_idx = set(gen.sample_without_replacement(ds.l, spec.test_count))
    train_examples = [ex for i, ex in enumerate(ds.examples) if i not in test_idx]
    test_examples = [ex for i, ex in enumerate(ds.examples) if i in test_idx]
    return (ds.replace_examples(train_examples, name=f"{ds.name}-train"),
            ds.replace_examples(test_examples, name=f"{ds.name}-test"))


def min_max_normalize(train: DataSet, others: Iterable[DataSet] = ()) -> tuple[DataSet, list[DataSet]]:
    """Rescale every attribute to [0, 1] with min/max fitted on ``train`` only.

    The same affine map is applied to the other datasets, whose values may
    therefore fall outside [0, 1].  Constant attributes map to 0.
    """
    if train.l == 0:
        raise DataError("cannot fit normalization on an empty training set")
    X = train.features_matrix()
    lo = X.min(axis=0)
    hi = X.max(axis=0)
    span = hi - lo
    safe = np.where(span > 0, span, 1.0)

    def transform(ds: DataSet) -> DataSet:
        if ds.n != train.n:
            raise DataError("attribute count mismatch between datasets")
        M = (ds.features_matrix() - lo) / safe
        M[:, span == 0] = 0.0
        examples = [
            LabeledExample(tuple(row), ex.label, ex.display_id)
            for row, ex in zip(M, ds.examples)
        ]
        return ds.replace_examples(examples)

    return transform(train), [transform(d) for d in others]
