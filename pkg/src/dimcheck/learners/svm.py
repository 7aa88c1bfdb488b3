"""Linear SVM trained by Pegasos-style subgradient descent on the hinge loss."""
from __future__ import annotations

import numpy as np

from .base import ClassWeights, Model, Standardizer, TrainConfig, TrainingError, check_training_data

DEFAULT_C = 1.0
DEFAULT_EPOCHS = 1000
PLATEAU_EPOCHS = 50
PLATEAU_TOL = 1e-6


def hinge_objective(w, b, X, ys, sw, lam) -> float:
    """lam/2 |w|^2 + weighted mean hinge loss, with labels ys in {-1, +1}."""
    margins = ys * (X @ w + b)
    return 0.5 * lam * float(w @ w) + float(np.sum(sw * np.maximum(0.0, 1.0 - margins)) / sw.sum())


class LinearSVM(Model):
    kind = "linear_svm"
    threshold = 0.0

    def __init__(self, weights, bias: float, standardizer: Standardizer | None = None, training_log=None):
        self.weights = np.asarray(weights, dtype=np.float64)
        self.bias = float(bias)
        self.standardizer = standardizer
        self.n_features = self.weights.size
        self.training_log = list(training_log or [])

    @classmethod
    def fit(cls, X, y, config: TrainConfig | None = None) -> "LinearSVM":
        """Full-batch subgradient descent with step 1/(lam t), lam = 1/(C n).

        Each epoch is one deterministic pass over all rows in their given
        order. The bias is a regularised constant feature. Training stops after ``epochs``
        (1000) or once the objective has not improved by a relative
        ``PLATEAU_TOL`` for ``PLATEAU_EPOCHS`` epochs; the best iterate is kept.
        """
        config = config or TrainConfig()
        X, y = check_training_data(X, y)
        p = config.params
        C = float(p.get("C", DEFAULT_C))
        epochs = int(p.get("epochs", DEFAULT_EPOCHS))
        std = Standardizer.fit(X) if p.get("standardize", True) else None
        Z = std(X) if std is not None else X
        n, F = Z.shape
        lam = 1.0 / (C * n)
        ys = np.where(y == 1, 1.0, -1.0)
        sw = ClassWeights.from_labels(y, config.class_weighted).per_sample(y)
        sw = sw / sw.mean()
        radius = 1.0 / np.sqrt(lam)
        # constant column carries the bias, regularised along with the weights
        Za = np.hstack([Z, np.ones((n, 1))])

        w = np.zeros(F + 1)
        best = (np.inf, w.copy())
        stale = 0
        log = []
        for t in range(1, epochs + 1):
            viol = ys * (Za @ w) < 1.0
            coef = sw[viol] * ys[viol]
            # w <- w - (1 / (lam t)) * (lam w - sum_viol sw y x / n)
            w = (1.0 - 1.0 / t) * w + (coef @ Za[viol]) / (lam * t * n)
            norm = np.linalg.norm(w)
            if norm > radius:
                w *= radius / norm
            obj = hinge_objective(w[:-1], w[-1], Z, ys, sw, lam) + 0.5 * lam * w[-1] ** 2
            if not np.isfinite(obj):
                raise TrainingError(f"linear SVM objective became non-finite at epoch {t}")
            log.append(obj)
            if obj < best[0] - PLATEAU_TOL * max(1.0, abs(best[0])):
                stale = 0
            else:
                stale += 1
            if obj < best[0]:
                best = (obj, w.copy())
            if stale >= PLATEAU_EPOCHS:
                break
        return cls(best[1][:-1], best[1][-1], std, log)

    def score(self, X) -> np.ndarray:
        """Signed margin w.x + b."""
        X = self._check(X)
        if self.standardizer is not None:
            X = self.standardizer(X)
        return X @ self.weights + self.bias

    def to_dict(self) -> dict:
        return {"kind": self.kind, "weights": self.weights.tolist(), "bias": self.bias,
                "standardizer": None if self.standardizer is None else self.standardizer.to_dict(),
                "training_log": self.training_log}

    @classmethod
    def from_dict(cls, d) -> "LinearSVM":
        std = None if d.get("standardizer") is None else Standardizer.from_dict(d["standardizer"])
        return cls(d["weights"], d["bias"], std, d.get("training_log"))
