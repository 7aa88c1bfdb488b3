"""CART decision tree with (weighted) Gini impurity."""
from __future__ import annotations

import numpy as np

from .base import ClassWeights, Model, TrainConfig, check_training_data

LEAF = -1


def _best_split(X, y, w, features):
    """Lowest weighted-Gini split over ``features``.

    Returns (feature, threshold) or None when every candidate column is
    constant. Ties go to the lowest feature index, then the lowest threshold.
    """
    Xf = X[:, features]
    order = np.argsort(Xf, axis=0, kind="stable")
    xs = np.take_along_axis(Xf, order, axis=0)
    ws = w[order]
    wpos = ws * (y[order] == 1)
    left_w = np.cumsum(ws, axis=0)[:-1]
    left_p = np.cumsum(wpos, axis=0)[:-1]
    total_w = left_w[-1] + ws[-1]
    total_p = left_p[-1] + wpos[-1]
    right_w = total_w - left_w
    right_p = total_p - left_p
    with np.errstate(divide="ignore", invalid="ignore"):
        # weighted Gini of a child is  w * 2 p (1 - p)  with p = wpos / w
        gini_l = 2.0 * left_p * (left_w - left_p) / left_w
        gini_r = 2.0 * right_p * (right_w - right_p) / right_w
    cost = gini_l + gini_r
    valid = xs[1:] > xs[:-1]
    cost = np.where(valid, cost, np.inf)
    best = None
    best_cost = np.inf
    for k in np.argsort(features, kind="stable"):
        col = cost[:, k]
        i = int(np.argmin(col))
        if col[i] < best_cost:
            best_cost = col[i]
            best = (int(features[k]), 0.5 * (xs[i, k] + xs[i + 1, k]))
    if best is not None and not np.isfinite(best_cost):
        return None
    return best


class DecisionTree(Model):
    kind = "decision_tree"

    def __init__(self, feature, threshold, left, right, value, n_features):
        self.feature = np.asarray(feature, dtype=np.int64)
        self.threshold_ = np.asarray(threshold, dtype=np.float64)
        self.left = np.asarray(left, dtype=np.int64)
        self.right = np.asarray(right, dtype=np.int64)
        self.value = np.asarray(value, dtype=np.float64)
        self.n_features = n_features

    @classmethod
    def fit(cls, X, y, config: TrainConfig | None = None, sample_weight=None,
            max_features: int | None = None, rng=None) -> "DecisionTree":
        config = config or TrainConfig()
        X, y = check_training_data(X, y)
        n, F = X.shape
        if sample_weight is None:
            sample_weight = ClassWeights.from_labels(y, config.class_weighted).per_sample(y)
        w = np.asarray(sample_weight, dtype=np.float64)
        max_depth = config.params.get("max_depth")
        if max_features is not None and max_features < F and rng is None:
            rng = np.random.default_rng(config.seed)

        feature, threshold, left, right, value = [], [], [], [], []

        def new_node(idx):
            feature.append(LEAF)
            threshold.append(0.0)
            left.append(LEAF)
            right.append(LEAF)
            wi = w[idx]
            value.append(float(np.sum(wi * (y[idx] == 1)) / np.sum(wi)))
            return len(value) - 1

        stack = [(new_node(np.arange(n)), np.arange(n), 0)]
        while stack:
            node, idx, depth = stack.pop()
            yi = y[idx]
            if idx.size < 2 or yi.min() == yi.max():
                continue
            if max_depth is not None and depth >= max_depth:
                continue
            if max_features is not None and max_features < F:
                feats = np.sort(rng.choice(F, size=max_features, replace=False))
            else:
                feats = np.arange(F)
            split = _best_split(X[idx], yi, w[idx], feats)
            if split is None and feats.size < F:
                # every sampled column is constant here; fall back to the rest
                split = _best_split(X[idx], yi, w[idx], np.setdiff1d(np.arange(F), feats))
            if split is None:
                continue
            f, t = split
            go_left = X[idx, f] <= t
            li, ri = idx[go_left], idx[~go_left]
            feature[node], threshold[node] = f, t
            left[node] = new_node(li)
            right[node] = new_node(ri)
            # right pushed first so the left subtree is expanded first
            stack.append((right[node], ri, depth + 1))
            stack.append((left[node], li, depth + 1))
        return cls(feature, threshold, left, right, value, F)

    @property
    def n_nodes(self) -> int:
        return int(self.value.size)

    def apply(self, X) -> np.ndarray:
        X = self._check(X)
        node = np.zeros(X.shape[0], dtype=np.int64)
        rows = np.arange(X.shape[0])
        active = self.feature[node] != LEAF
        while np.any(active):
            r = rows[active]
            nd = node[r]
            go_left = X[r, self.feature[nd]] <= self.threshold_[nd]
            node[r] = np.where(go_left, self.left[nd], self.right[nd])
            active = self.feature[node] != LEAF
        return node

    def score(self, X) -> np.ndarray:
        """Weighted fraction of class 1 in the leaf each row lands in."""
        return self.value[self.apply(X)]

    def to_dict(self) -> dict:
        return {"kind": self.kind, "n_features": self.n_features,
                "feature": self.feature.tolist(), "threshold": self.threshold_.tolist(),
                "left": self.left.tolist(), "right": self.right.tolist(),
                "value": self.value.tolist()}

    @classmethod
    def from_dict(cls, d) -> "DecisionTree":
        return cls(d["feature"], d["threshold"], d["left"], d["right"], d["value"], d["n_features"])
