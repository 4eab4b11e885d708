"""The observation table and its CSV format.

CSV layout: a header ``x1,...,xp,y`` followed by one row per observation.
The last column is always the response. Floats are written with ``repr`` so
a write/read cycle is exact.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import CsvParseError


@dataclass(frozen=True)
class Dataset:
    x: np.ndarray
    y: np.ndarray
    feature_names: tuple[str, ...] = field(default=())

    def __post_init__(self):
        x = np.asarray(self.x, dtype=np.float64)
        y = np.asarray(self.y, dtype=np.float64)
        if x.ndim == 1:
            x = x.reshape(-1, 1)
        if x.ndim != 2 or y.ndim != 1:
            raise ValueError("x must be 2-D and y 1-D")
        if x.shape[0] != y.shape[0]:
            raise ValueError(f"x has {x.shape[0]} rows but y has {y.shape[0]}")
        if y.shape[0] < 1:
            raise ValueError("a dataset needs at least one observation")
        if not (np.isfinite(x).all() and np.isfinite(y).all()):
            raise ValueError("dataset entries must be finite")
        names = tuple(self.feature_names) or tuple(f"x{j + 1}" for j in range(x.shape[1]))
        if len(names) != x.shape[1]:
            raise ValueError("feature_names length must equal the number of columns")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "feature_names", names)

    @property
    def n(self) -> int:
        return self.y.shape[0]

    @property
    def p(self) -> int:
        return self.x.shape[1]

    def take(self, rows) -> "Dataset":
        rows = np.asarray(rows, dtype=np.int64)
        return Dataset(self.x[rows], self.y[rows], self.feature_names)

    def columns(self, p: int) -> "Dataset":
        """Restrict to the first ``p`` explanatory columns."""
        if p > self.p:
            raise ValueError(f"requested {p} columns but the dataset has {self.p}")
        if p == self.p:
            return self
        return Dataset(self.x[:, :p], self.y, self.feature_names[:p])


def write_csv(data: Dataset, path) -> None:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([*data.feature_names, "y"])
        for xi, yi in zip(data.x, data.y):
            writer.writerow([repr(float(v)) for v in xi] + [repr(float(yi))])


def read_csv(path) -> Dataset:
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise CsvParseError("empty file", row=1)
    header = [h.strip() for h in rows[0]]
    if len(header) < 2:
        raise CsvParseError("need at least one feature column and a response column", row=1)
    width = len(header)
    values = []
    for r, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != width:
            raise CsvParseError(f"expected {width} fields, found {len(row)}", row=r)
        parsed = []
        for c, cell in enumerate(row, start=1):
            try:
                v = float(cell)
            except ValueError:
                raise CsvParseError(f"non-numeric cell {cell!r}", row=r, column=c) from None
            if not math.isfinite(v):
                raise CsvParseError(f"non-finite cell {cell!r}", row=r, column=c)
            parsed.append(v)
        values.append(parsed)
    if not values:
        raise CsvParseError("no data rows", row=2)
    arr = np.array(values, dtype=np.float64)
    return Dataset(arr[:, :-1], arr[:, -1], tuple(header[:-1]))
