"""Correlation-integral (box-counting) estimate of intrinsic dimensionality.

The correlation integral C(r) is the fraction of unordered point pairs closer
than r.  On a d-dimensional manifold C(r) grows like r**d at small r, so the
largest smoothed slope of ln C(r) against ln r estimates d.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.spatial.distance import pdist

from .dataset import Dataset

NORMS = {"L1": "cityblock", "L2": "euclidean"}

DEFAULT_STEPS = 50
DEFAULT_WINDOW = 3
DEFAULT_MIN_PAIRS = 100


class EstimationError(ValueError):
    pass


def _norm(norm: str) -> str:
    key = norm.upper()
    if key not in NORMS:
        raise ValueError(f"unknown norm {norm!r}; expected L1 or L2")
    return key


@dataclass(frozen=True)
class RadiusSchedule:
    log_start: float
    log_end: float
    steps: int
    scale: float = 1.0  # multiplies every radius; see scaled()

    def __post_init__(self):
        if self.steps < 4:
            raise ValueError("a radius schedule needs at least 4 steps")
        if not (math.isfinite(self.log_start) and math.isfinite(self.log_end)):
            raise ValueError("schedule endpoints must be finite")
        if not self.log_end > self.log_start:
            raise ValueError("log_end must exceed log_start")

    @property
    def radii(self) -> np.ndarray:
        k = np.arange(self.steps)
        return self.scale * np.exp(self.log_start + k * (self.log_end - self.log_start) / (self.steps - 1))

    def scaled(self, c: float) -> "RadiusSchedule":
        # exact for powers of two, unlike shifting the log endpoints
        if not c > 0:
            raise ValueError("scale factor must be positive")
        return RadiusSchedule(self.log_start, self.log_end, self.steps, self.scale * c)


@dataclass(frozen=True)
class CorrelationCurve:
    radii: np.ndarray
    pair_counts: np.ndarray
    n_points: int
    norm: str

    @property
    def c_values(self) -> np.ndarray:
        return 2.0 * self.pair_counts / (self.n_points * (self.n_points - 1.0))


@dataclass(frozen=True)
class DimensionEstimate:
    value: float
    slopes: np.ndarray
    smoothed_slopes: np.ndarray
    curve: CorrelationCurve
    usable: np.ndarray = field(repr=False)  # boolean mask over curve.radii
    window: int = DEFAULT_WINDOW
    min_pairs: int = 1

    @property
    def usable_points(self) -> int:
        return int(np.count_nonzero(self.usable))

    @property
    def log_r(self) -> np.ndarray:
        return np.log(self.curve.radii[self.usable])

    @property
    def log_c(self) -> np.ndarray:
        return np.log(self.curve.c_values[self.usable])

    def summary(self, dataset: str = "") -> dict:
        return {
            "dataset": dataset,
            "norm": self.curve.norm,
            "steps": int(self.curve.radii.size),
            "window": self.window,
            "min_pairs": self.min_pairs,
            "value": float(self.value),
            "usable_points": self.usable_points,
        }


def pairwise_distances(data, norm: str = "L1") -> np.ndarray:
    """All N(N-1)/2 unordered-pair distances, sorted ascending."""
    X = data.features if isinstance(data, Dataset) else np.asarray(data, dtype=np.float64)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    if X.shape[0] < 2:
        raise EstimationError("need at least 2 rows to form a pair")
    return np.sort(pdist(X, metric=NORMS[_norm(norm)]), kind="stable")


def pair_counts(distances: np.ndarray, radii) -> np.ndarray:
    """Number of pairs with distance strictly below each radius."""
    return np.searchsorted(distances, np.asarray(radii, dtype=np.float64), side="left").astype(np.int64)


def correlation_integral(distances: np.ndarray, n: int, r: float) -> float:
    if n < 2:
        raise EstimationError("need n >= 2")
    if not r > 0:
        raise ValueError("radius must be positive")
    return 2.0 * int(pair_counts(distances, [r])[0]) / (n * (n - 1.0))


def default_schedule(distances: np.ndarray, steps: int = DEFAULT_STEPS) -> RadiusSchedule:
    positive = distances[distances > 0]
    if positive.size == 0:
        raise EstimationError("zero diameter: every pairwise distance is 0")
    lo = math.log(float(positive.min()))
    hi = math.log(float(distances.max())) + math.log(1.01)
    return RadiusSchedule(lo, hi, steps)


def correlation_curve(distances: np.ndarray, n: int, schedule: RadiusSchedule, norm: str = "L1") -> CorrelationCurve:
    radii = schedule.radii
    return CorrelationCurve(radii, pair_counts(distances, radii), n, _norm(norm))


def moving_average(values: np.ndarray, window: int) -> np.ndarray:
    """Centred moving average; windows are truncated at both ends."""
    if window < 1 or window % 2 == 0:
        raise ValueError("smoothing window must be a positive odd integer")
    values = np.asarray(values, dtype=np.float64)
    h = window // 2
    csum = np.concatenate(([0.0], np.cumsum(values)))
    i = np.arange(values.size)
    lo = np.maximum(i - h, 0)
    hi = np.minimum(i + h + 1, values.size)
    return (csum[hi] - csum[lo]) / (hi - lo)


def effective_min_pairs(min_pairs: int, n_points: int) -> int:
    """Clip the pair-count floor so small datasets still yield a curve."""
    total = n_points * (n_points - 1) // 2
    return max(1, min(int(min_pairs), total // 100))


def estimate_dimension(
    data,
    schedule: RadiusSchedule | None = None,
    norm: str = "L1",
    smoothing_window: int = DEFAULT_WINDOW,
    steps: int = DEFAULT_STEPS,
    min_pairs: int = DEFAULT_MIN_PAIRS,
    normalize: bool = False,
) -> DimensionEstimate:
    """Maximum smoothed log-log slope of the correlation integral.

    Radii whose pair count is below ``min_pairs`` are dropped before the logs
    are taken; at those radii C(r) is a handful of pairs and its slope is
    dominated by counting noise.  ``min_pairs=1`` keeps every radius with
    C(r) > 0.  The floor is clipped to 1% of all pairs for small datasets.
    """
    X = data.features if isinstance(data, Dataset) else np.asarray(data, dtype=np.float64)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    n = X.shape[0]
    if n < 3:
        raise EstimationError(f"need at least 3 rows, got {n}")
    if min_pairs < 1:
        raise ValueError("min_pairs must be >= 1")
    if normalize:
        X = minmax_normalize(X)
    norm = _norm(norm)
    dist = pairwise_distances(X, norm)
    if schedule is None:
        schedule = default_schedule(dist, steps)
    elif not np.any(dist > 0):
        raise EstimationError("zero diameter: every pairwise distance is 0")
    curve = correlation_curve(dist, n, schedule, norm)
    floor = effective_min_pairs(min_pairs, n)
    usable = curve.pair_counts >= floor
    if np.count_nonzero(usable) < 3:
        raise EstimationError(
            f"curve too sparse: only {np.count_nonzero(usable)} radii have >= {floor} pairs")
    r = curve.radii[usable]
    if np.any(r[1:] <= r[:-1]):
        # radii collapse when distances sit in the subnormal range
        raise EstimationError("radius schedule is not strictly increasing at this scale")
    log_c = np.log(curve.c_values[usable])
    # log of radius ratios keeps the slopes invariant under exact rescaling
    slopes = np.diff(log_c) / np.log(r[1:] / r[:-1])
    smoothed = moving_average(slopes, smoothing_window)
    value = max(float(smoothed.max()), 0.0)
    return DimensionEstimate(value, slopes, smoothed, curve, usable, smoothing_window, floor)


def minmax_normalize(X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    lo = X.min(axis=0)
    span = X.max(axis=0) - lo
    span[span == 0] = 1.0
    return (X - lo) / span


def export_curve(estimate: DimensionEstimate, path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["ln_r", "ln_C", "slope", "smoothed_slope"])
        for k, (lr, lc) in enumerate(zip(estimate.log_r, estimate.log_c)):
            if k == 0:
                w.writerow([repr(float(lr)), repr(float(lc)), "", ""])
            else:
                w.writerow([repr(float(lr)), repr(float(lc)),
                            repr(float(estimate.slopes[k - 1])),
                            repr(float(estimate.smoothed_slopes[k - 1]))])


def read_curve(path) -> dict[str, np.ndarray]:
    cols: dict[str, list[float]] = {"ln_r": [], "ln_C": [], "slope": [], "smoothed_slope": []}
    with Path(path).open(newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            for k in cols:
                if row[k] != "":
                    cols[k].append(float(row[k]))
    return {k: np.array(v) for k, v in cols.items()}


def write_summary(estimate: DimensionEstimate, path, dataset: str = "") -> dict:
    summary = estimate.summary(dataset)
    Path(path).write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return summary
