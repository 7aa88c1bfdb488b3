from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


class TrainingError(RuntimeError):
    pass


@dataclass(frozen=True)
class TrainConfig:
    seed: int = 0
    max_epochs: int = 100
    patience: int = 3
    class_weighted: bool = False
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.max_epochs < 1:
            raise ValueError("max_epochs must be >= 1")
        if self.patience < 1:
            raise ValueError("patience must be >= 1")

    def to_dict(self) -> dict:
        return {"seed": self.seed, "max_epochs": self.max_epochs, "patience": self.patience,
                "class_weighted": self.class_weighted, "params": dict(self.params)}


@dataclass(frozen=True)
class ClassWeights:
    """Per-class loss weights.

    With weighting on, each class is weighted by the reciprocal of its share
    of the training rows, so a 25% positive class gets weight 4.
    """

    weight_positive: float = 1.0
    weight_negative: float = 1.0

    @classmethod
    def from_labels(cls, labels, enabled: bool) -> "ClassWeights":
        y = np.asarray(labels)
        n_pos = int(np.count_nonzero(y == 1))
        n_neg = y.size - n_pos
        if not enabled:
            return cls(1.0, 1.0)
        if n_pos == 0 or n_neg == 0:
            raise TrainingError("class weights need both classes present")
        return cls(y.size / n_pos, y.size / n_neg)

    def per_sample(self, labels) -> np.ndarray:
        return np.where(np.asarray(labels) == 1, self.weight_positive, self.weight_negative)


def check_training_data(X, y) -> tuple[np.ndarray, np.ndarray]:
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y).astype(np.int64).ravel()
    if X.ndim != 2 or X.shape[0] != y.size:
        raise TrainingError(f"bad training shapes: X {X.shape}, y {y.shape}")
    if np.unique(y).size < 2:
        raise TrainingError("training data must contain both classes")
    return X, y


class Standardizer:
    """Column z-scoring fitted on training rows; constant columns pass through centred."""

    def __init__(self, mean, scale):
        self.mean = np.asarray(mean, dtype=np.float64)
        self.scale = np.asarray(scale, dtype=np.float64)

    @classmethod
    def fit(cls, X) -> "Standardizer":
        mean = X.mean(axis=0)
        scale = X.std(axis=0)
        scale[scale == 0] = 1.0
        return cls(mean, scale)

    def __call__(self, X) -> np.ndarray:
        return (X - self.mean) / self.scale

    def to_dict(self) -> dict:
        return {"mean": self.mean.tolist(), "scale": self.scale.tolist()}

    @classmethod
    def from_dict(cls, d) -> "Standardizer":
        return cls(d["mean"], d["scale"])


class Model:
    """Common predict/score surface. Subclasses set ``kind`` and ``threshold``."""

    kind = ""
    threshold = 0.5
    n_features = 0

    def score(self, X) -> np.ndarray:
        raise NotImplementedError

    def predict(self, X) -> np.ndarray:
        return (self.score(X) >= self.threshold).astype(np.int64)

    def _check(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim == 1:
            X = X.reshape(1, -1)
        if X.shape[1] != self.n_features:
            raise ValueError(f"model expects {self.n_features} features, got {X.shape[1]}")
        return X

    def to_dict(self) -> dict:
        raise NotImplementedError

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict()), encoding="utf-8")
