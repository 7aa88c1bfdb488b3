"""Recall, false alarm and AUC for binary classifiers.

Undefined values (recall without positives, false alarm without negatives)
are reported as ``None`` rather than a number.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np
from scipy.stats import rankdata


class MetricError(ValueError):
    pass


@dataclass(frozen=True)
class MetricsRecord:
    tp: int
    fp: int
    tn: int
    fn: int
    recall: float | None
    false_alarm: float | None
    auc: float | None

    @property
    def n(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "MetricsRecord":
        return cls(**{k: d[k] for k in ("tp", "fp", "tn", "fn", "recall", "false_alarm", "auc")})


def _binary(v, what: str) -> np.ndarray:
    v = np.asarray(v).ravel()
    if not np.all((v == 0) | (v == 1)):
        raise MetricError(f"{what} must be 0/1")
    return v.astype(np.int64)


def confusion(labels, predictions) -> tuple[int, int, int, int]:
    """Return (tp, fp, tn, fn) with class 1 as the positive class."""
    y = _binary(labels, "labels")
    p = _binary(predictions, "predictions")
    if y.size != p.size:
        raise MetricError(f"length mismatch: {y.size} labels vs {p.size} predictions")
    if y.size == 0:
        raise MetricError("empty input")
    tp = int(np.sum((y == 1) & (p == 1)))
    fp = int(np.sum((y == 0) & (p == 1)))
    tn = int(np.sum((y == 0) & (p == 0)))
    fn = int(np.sum((y == 1) & (p == 0)))
    return tp, fp, tn, fn


def recall(tp: int, fn: int) -> float | None:
    return tp / (tp + fn) if tp + fn > 0 else None


def false_alarm(fp: int, tn: int) -> float | None:
    return fp / (fp + tn) if fp + tn > 0 else None


def auc(labels, scores) -> float:
    """Mann-Whitney estimate of P(score_pos > score_neg), ties counted as 1/2."""
    y = _binary(labels, "labels")
    s = np.asarray(scores, dtype=np.float64).ravel()
    if y.size != s.size:
        raise MetricError(f"length mismatch: {y.size} labels vs {s.size} scores")
    n_pos = int(y.sum())
    n_neg = y.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise MetricError("AUC undefined: labels contain a single class")
    ranks = rankdata(s, method="average")
    u = ranks[y == 1].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u / (n_pos * n_neg))


def evaluate(labels, predictions, scores=None) -> MetricsRecord:
    tp, fp, tn, fn = confusion(labels, predictions)
    a = None
    if scores is not None and tp + fn > 0 and fp + tn > 0:
        a = auc(labels, scores)
    return MetricsRecord(tp, fp, tn, fn, recall(tp, fn), false_alarm(fp, tn), a)
