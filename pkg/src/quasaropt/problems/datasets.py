"""CSV dataset ingestion for binary-labeled feature matrices."""

import csv

import numpy as np

from ..errors import ParseError


def load_csv(path, label_column):
    """Parse a rectangular numeric CSV into (features, labels).

    ``label_column`` is a zero-based column index; its two distinct values
    are mapped to {-1, +1} by sorted order.  Errors report the offending row
    (1-based, header-free files assumed).
    """
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        width = None
        for lineno, row in enumerate(reader, start=1):
            if not row:
                continue
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise ParseError(
                    f"row {lineno}: expected {width} cells, got {len(row)}")
            try:
                rows.append([float(c) for c in row])
            except ValueError as exc:
                raise ParseError(f"row {lineno}: non-numeric cell ({exc})")
    if not rows:
        raise ParseError(f"{path}: empty file")
    data = np.asarray(rows)
    if not -data.shape[1] <= label_column < data.shape[1]:
        raise ParseError(
            f"label column {label_column} outside 0..{data.shape[1] - 1}")
    labels_raw = data[:, label_column]
    features = np.delete(data, label_column % data.shape[1], axis=1)
    uniq = np.unique(labels_raw)
    if len(uniq) != 2:
        raise ParseError(
            f"label column has {len(uniq)} distinct values, need exactly 2")
    labels = np.where(labels_raw == uniq[0], -1.0, 1.0)
    return features, labels
