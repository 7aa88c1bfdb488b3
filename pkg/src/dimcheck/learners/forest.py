"""Random forest: bootstrapped CART trees voting by majority."""
from __future__ import annotations

import math

import numpy as np

from .base import ClassWeights, Model, TrainConfig, check_training_data
from .tree import DecisionTree

DEFAULT_TREES = 100


class RandomForest(Model):
    kind = "random_forest"

    def __init__(self, trees: list[DecisionTree], n_features: int):
        if not trees:
            raise ValueError("a forest needs at least one tree")
        self.trees = list(trees)
        self.n_features = n_features

    @classmethod
    def fit(cls, X, y, config: TrainConfig | None = None) -> "RandomForest":
        """Grow ``n_trees`` trees, each on its own bootstrap sample.

        ``params`` keys: n_trees (100), bootstrap (True), max_features
        ("sqrt" or an int; None means all features), max_depth.
        """
        config = config or TrainConfig()
        X, y = check_training_data(X, y)
        n, F = X.shape
        p = config.params
        n_trees = int(p.get("n_trees", DEFAULT_TREES))
        bootstrap = bool(p.get("bootstrap", True))
        mf = p.get("max_features", "sqrt")
        if mf == "sqrt":
            mf = max(1, int(math.sqrt(F)))
        elif mf is None:
            mf = F
        mf = int(min(mf, F))
        weights = ClassWeights.from_labels(y, config.class_weighted).per_sample(y)
        seeds = np.random.SeedSequence(config.seed).spawn(n_trees)
        trees = []
        for ss in seeds:
            rng = np.random.default_rng(ss)
            if bootstrap:
                idx = rng.integers(0, n, size=n)
                # a one-class bootstrap cannot be split; resample
                while np.unique(y[idx]).size < 2:
                    idx = rng.integers(0, n, size=n)
            else:
                idx = np.arange(n)
            trees.append(DecisionTree.fit(X[idx], y[idx], config, sample_weight=weights[idx],
                                          max_features=mf, rng=rng))
        return cls(trees, F)

    def votes(self, X) -> np.ndarray:
        X = self._check(X)
        return np.stack([t.predict(X) for t in self.trees])

    def score(self, X) -> np.ndarray:
        """Fraction of trees voting for class 1."""
        return self.votes(X).sum(axis=0) / len(self.trees)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "n_features": self.n_features,
                "trees": [t.to_dict() for t in self.trees]}

    @classmethod
    def from_dict(cls, d) -> "RandomForest":
        return cls([DecisionTree.from_dict(t) for t in d["trees"]], d["n_features"])
