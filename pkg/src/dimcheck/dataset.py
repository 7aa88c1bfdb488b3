"""Tabular binary-labelled datasets: loading, synthesis, shuffling, binning."""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


class DataError(ValueError):
    """Raised when a dataset cannot be loaded or violates its invariants."""


@dataclass(frozen=True, eq=False)
class Dataset:
    features: np.ndarray
    labels: np.ndarray
    feature_names: tuple[str, ...] = ()
    name: str = "data"

    def __post_init__(self):
        X = np.array(self.features, dtype=np.float64)
        if X.ndim == 1:
            X = X.reshape(-1, 1)
        y = np.asarray(self.labels).astype(np.int64).ravel()
        if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
            raise DataError(f"features must be a non-empty N x F matrix, got shape {X.shape}")
        if y.shape[0] != X.shape[0]:
            raise DataError(f"{y.shape[0]} labels for {X.shape[0]} rows")
        if not np.all(np.isfinite(X)):
            raise DataError("features contain NaN or infinite values")
        if not np.all((y == 0) | (y == 1)):
            raise DataError("labels must be 0 or 1")
        names = tuple(self.feature_names) or tuple(f"x{j}" for j in range(X.shape[1]))
        if len(names) != X.shape[1]:
            raise DataError(f"{len(names)} feature names for {X.shape[1]} columns")
        X.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "features", X)
        object.__setattr__(self, "labels", y)
        object.__setattr__(self, "feature_names", names)

    @property
    def n_rows(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    def take(self, index, name: str | None = None) -> "Dataset":
        index = np.asarray(index, dtype=np.int64)
        return Dataset(self.features[index], self.labels[index], self.feature_names,
                       self.name if name is None else name)

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return (self.name == other.name
                and self.feature_names == other.feature_names
                and np.array_equal(self.features, other.features)
                and np.array_equal(self.labels, other.labels))


@dataclass(frozen=True)
class SplitPlan:
    seed: int
    n_bins: int
    bin_assignments: np.ndarray = field(repr=False)

    def bin_indices(self, b: int) -> np.ndarray:
        return np.flatnonzero(self.bin_assignments == b)


@dataclass(frozen=True)
class SyntheticSpec:
    kind: str  # "uniform_cube" | "embedded_line"
    ambient_dim: int
    n_samples: int
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("uniform_cube", "embedded_line"):
            raise ValueError(f"unknown synthetic kind {self.kind!r}")
        if self.ambient_dim < 1 or self.n_samples < 1:
            raise ValueError("ambient_dim and n_samples must be positive")


def load_csv(path, label_column="label", positive_label: str = "1", name: str | None = None) -> Dataset:
    """Read a headed CSV; every non-label column must be numeric.

    ``label_column`` is a header name or a zero-based column index. Label cells
    equal to ``positive_label`` (after stripping whitespace) become 1, anything
    else becomes 0.
    """
    path = Path(path)
    if not path.is_file():
        raise DataError(f"no such file: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        rows = [r for r in reader if r and any(c.strip() for c in r)]

    if isinstance(label_column, int) or (isinstance(label_column, str) and label_column.isdigit()
                                         and label_column not in header):
        li = int(label_column)
        if not 0 <= li < len(header):
            raise DataError(f"{path}: label column index {li} out of range")
    else:
        if label_column not in header:
            raise DataError(f"{path}: label column {label_column!r} not in header")
        li = header.index(label_column)
    if not rows:
        raise DataError(f"{path}: no data rows")

    feat_cols = [j for j in range(len(header)) if j != li]
    if not feat_cols:
        raise DataError(f"{path}: no feature columns")
    X = np.empty((len(rows), len(feat_cols)))
    y = np.empty(len(rows), dtype=np.int64)
    for i, row in enumerate(rows):
        lineno = i + 2
        if len(row) != len(header):
            raise DataError(f"{path}: row {lineno} has {len(row)} cells, header has {len(header)}")
        for k, j in enumerate(feat_cols):
            cell = row[j].strip()
            try:
                v = float(cell)
            except ValueError:
                raise DataError(f"{path}: row {lineno}, column {header[j]!r}: "
                                f"cannot parse {cell!r} as a number") from None
            if not np.isfinite(v):
                raise DataError(f"{path}: row {lineno}, column {header[j]!r}: non-finite value {cell!r}")
            X[i, k] = v
        y[i] = 1 if row[li].strip() == positive_label else 0
    return Dataset(X, y, tuple(header[j] for j in feat_cols), name or path.stem)


def save_csv(data: Dataset, path, label_column: str = "label") -> None:
    # repr() round-trips float64 exactly
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([*data.feature_names, label_column])
        for row, lab in zip(data.features, data.labels):
            w.writerow([repr(float(v)) for v in row] + [int(lab)])


def class_ratio(data: Dataset) -> float:
    return float(np.count_nonzero(data.labels)) / data.n_rows


def shuffle(data: Dataset, seed: int) -> Dataset:
    perm = np.random.default_rng(seed).permutation(data.n_rows)
    return data.take(perm)


def stratified_bins(data: Dataset, n_bins: int, seed: int) -> SplitPlan:
    """Assign rows to ``n_bins`` bins that each replicate the class ratio.

    Rows of each class are shuffled and dealt round-robin. The negative class
    continues dealing from where the positives stopped, which keeps bin sizes
    within one of each other.
    """
    n = data.n_rows
    if n_bins < 2:
        raise DataError("n_bins must be at least 2")
    if n_bins > n:
        raise DataError(f"cannot split {n} rows into {n_bins} bins")
    rng = np.random.default_rng(seed)
    assign = np.empty(n, dtype=np.int64)
    offset = 0
    for cls in (1, 0):
        idx = np.flatnonzero(data.labels == cls)
        idx = idx[rng.permutation(idx.size)]
        assign[idx] = (offset + np.arange(idx.size)) % n_bins
        offset = (offset + idx.size) % n_bins
    return SplitPlan(seed=seed, n_bins=n_bins, bin_assignments=assign)


def generate(spec: SyntheticSpec) -> Dataset:
    rng = np.random.default_rng(spec.seed)
    d, s = spec.ambient_dim, spec.n_samples
    if spec.kind == "uniform_cube":
        X = rng.random((s, d))
    else:
        v = rng.standard_normal(d)
        v /= np.linalg.norm(v)
        b = rng.random(d)
        t = rng.random(s)
        X = b + t[:, None] * v
    name = f"{spec.kind}_d{d}_s{s}_seed{spec.seed}"
    return Dataset(X, np.zeros(s, dtype=np.int64), name=name)


def describe(data: Dataset) -> dict:
    return {
        "name": data.name,
        "rows": data.n_rows,
        "features": data.n_features,
        "positives": int(np.count_nonzero(data.labels)),
        "positive_ratio": class_ratio(data),
    }
