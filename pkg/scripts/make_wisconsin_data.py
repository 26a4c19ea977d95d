#!/usr/bin/env python3
"""Convert the bundled UCI breast-cancer file into the tagged .data format.

Drops the sample-id column and the 16 rows with a missing bare-nuclei value,
maps class 2 -> 0 (Benign) and 4 -> 1 (Malignant), and writes wbc683.data
next to the source file (or to --output).
"""

import argparse
from pathlib import Path

from tcmnn.datamodel import DataSet, LabeledExample, write_data_file

ATTRIBUTES = (
    "Clump thickness", "Uniformity of cell size", "Uniformity of cell shape",
    "Marginal adhesion", "Single epithelial cell size", "Bare nuclei",
    "Bland chromatin", "Normal nucleoli", "Mitoses",
)


def load_uci_rows(path: Path):
    examples = []
    for line in path.read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line:
            continue
        fields = line.split(",")
        if "?" in fields:
            continue
        feats = tuple(float(v) for v in fields[1:10])
        label = 0 if fields[10] == "2" else 1
        examples.append(LabeledExample(feats, label))
    return examples


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--input", default=str(Path(__file__).resolve().parents[1]
                                               / "data" / "breast-cancer-wisconsin.data"))
    parser.add_argument("--output", default=None)
    args = parser.parse_args()

    src = Path(args.input)
    examples = load_uci_rows(src)
    ds = DataSet(name="wbc683", n=9, C=2, class_names=("Benign", "Malignant"),
                 classes_known=True, examples=tuple(examples),
                 attribute_names=ATTRIBUTES, output_name="Diagnosis")
    out = Path(args.output) if args.output else src.parent / "wbc683.data"
    out.write_bytes(write_data_file(ds))
    counts = ds.class_counts()
    print(f"wrote {out}: {ds.l} examples ({counts[0]} benign, {counts[1]} malignant)")


if __name__ == "__main__":
    main()
