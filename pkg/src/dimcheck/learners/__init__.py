"""Baseline classifiers: CART tree, random forest, linear SVM, and an MLP."""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from ..dataset import Dataset
from .base import ClassWeights, Model, TrainConfig, TrainingError
from .forest import RandomForest
from .mlp import MLP
from .svm import LinearSVM
from .tree import DecisionTree

KINDS = {
    "decision_tree": DecisionTree,
    "random_forest": RandomForest,
    "linear_svm": LinearSVM,
    "mlp": MLP,
}

ALIASES = {
    "tree": "decision_tree", "dt": "decision_tree",
    "forest": "random_forest", "rf": "random_forest",
    "svm": "linear_svm",
    "dnn": "mlp", "nn": "mlp",
}


def resolve_kind(kind: str) -> str:
    k = ALIASES.get(kind.lower(), kind.lower())
    if k not in KINDS:
        raise ValueError(f"unknown learner {kind!r}; choose from {sorted(KINDS) + sorted(ALIASES)}")
    return k


def fit(kind: str, train: Dataset, config: TrainConfig | None = None) -> Model:
    cls = KINDS[resolve_kind(kind)]
    return cls.fit(train.features, train.labels, config or TrainConfig())


def predict(model: Model, rows) -> np.ndarray:
    return model.predict(rows)


def score(model: Model, rows) -> np.ndarray:
    return model.score(rows)


def model_from_dict(d: dict) -> Model:
    return KINDS[d["kind"]].from_dict(d)


def load_model(path) -> Model:
    return model_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


__all__ = [
    "ClassWeights", "DecisionTree", "KINDS", "LinearSVM", "MLP", "Model", "RandomForest",
    "TrainConfig", "TrainingError", "fit", "load_model", "model_from_dict", "predict",
    "resolve_kind", "score",
]
