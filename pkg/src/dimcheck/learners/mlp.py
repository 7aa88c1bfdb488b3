"""Fully connected ReLU network with a two-way softmax head.

Trained with Adam on (optionally class-weighted) cross-entropy, inverted
dropout between hidden layers, and early stopping on the training loss.
"""
from __future__ import annotations

import numpy as np

from .base import ClassWeights, Model, Standardizer, TrainConfig, TrainingError, check_training_data

DEFAULTS = {
    "hidden_layers": 5,
    "hidden_units": 30,
    "learning_rate": 1e-3,
    "batch_size": 32,
    "dropout": 0.2,
}
ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-7


def init_params(layer_sizes, rng) -> list[tuple[np.ndarray, np.ndarray]]:
    """He-normal weights, zero biases."""
    params = []
    for fan_in, fan_out in zip(layer_sizes[:-1], layer_sizes[1:]):
        W = rng.standard_normal((fan_in, fan_out)) * np.sqrt(2.0 / fan_in)
        params.append((W, np.zeros(fan_out)))
    return params


def softmax(z: np.ndarray) -> np.ndarray:
    z = z - z.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def forward(params, X, dropout: float = 0.0, rng=None):
    """Return (probabilities, cache). Dropout masks hidden outputs feeding another hidden layer."""
    acts = [X]
    masks = []
    h = X
    n_hidden = len(params) - 1
    for i, (W, b) in enumerate(params[:-1]):
        h = np.maximum(h @ W + b, 0.0)
        if dropout > 0.0 and i < n_hidden - 1:
            keep = 1.0 - dropout
            m = (rng.random(h.shape) < keep) / keep
            h = h * m
        else:
            m = None
        masks.append(m)
        acts.append(h)
    W, b = params[-1]
    probs = softmax(h @ W + b)
    return probs, (acts, masks)


def weighted_cross_entropy(probs, y, sw) -> float:
    picked = probs[np.arange(y.size), y]
    with np.errstate(divide="ignore"):
        nll = -np.log(picked)
    return float(np.sum(sw * nll) / np.sum(sw))


def loss_and_grads(params, X, y, sw, dropout: float = 0.0, rng=None):
    """Weighted mean cross-entropy and its gradient w.r.t. every (W, b)."""
    probs, (acts, masks) = forward(params, X, dropout, rng)
    loss = weighted_cross_entropy(probs, y, sw)
    delta = probs.copy()
    delta[np.arange(y.size), y] -= 1.0
    delta *= (sw / np.sum(sw))[:, None]
    grads = [None] * len(params)
    for i in range(len(params) - 1, -1, -1):
        W, _ = params[i]
        a_in = acts[i]
        grads[i] = (a_in.T @ delta, delta.sum(axis=0))
        if i == 0:
            break
        delta = delta @ W.T
        m = masks[i - 1]
        if m is not None:
            delta = delta * m
        # acts[i] is post-ReLU (and post-dropout); zero exactly where the unit was off
        delta = delta * (acts[i] > 0)
    return loss, grads


class MLP(Model):
    kind = "mlp"

    def __init__(self, params, standardizer: Standardizer | None, training_log=None, best_epoch=None):
        self.params = [(np.asarray(W, dtype=np.float64), np.asarray(b, dtype=np.float64)) for W, b in params]
        self.standardizer = standardizer
        self.n_features = self.params[0][0].shape[0]
        self.training_log = list(training_log or [])
        self.best_epoch = best_epoch

    @property
    def epochs_completed(self) -> int:
        return len(self.training_log)

    @classmethod
    def fit(cls, X, y, config: TrainConfig | None = None) -> "MLP":
        """Mini-batch Adam until ``max_epochs`` or ``patience`` epochs without a lower training loss."""
        config = config or TrainConfig()
        X, y = check_training_data(X, y)
        p = {**DEFAULTS, **config.params}
        rng = np.random.default_rng(config.seed)
        std = Standardizer.fit(X) if p.get("standardize", True) else None
        Z = std(X) if std is not None else X
        n, F = Z.shape
        sizes = [F] + [int(p["hidden_units"])] * int(p["hidden_layers"]) + [2]
        params = init_params(sizes, rng)
        sw = ClassWeights.from_labels(y, config.class_weighted).per_sample(y)
        lr = float(p["learning_rate"])
        batch = int(p["batch_size"])
        dropout = float(p["dropout"])

        m = [(np.zeros_like(W), np.zeros_like(b)) for W, b in params]
        v = [(np.zeros_like(W), np.zeros_like(b)) for W, b in params]
        step = 0
        log = []
        best_loss, best_epoch = np.inf, 0
        for epoch in range(1, config.max_epochs + 1):
            order = rng.permutation(n)
            total = 0.0
            for start in range(0, n, batch):
                idx = order[start:start + batch]
                with np.errstate(over="ignore", invalid="ignore"):
                    loss, grads = loss_and_grads(params, Z[idx], y[idx], sw[idx], dropout, rng)
                if not np.isfinite(loss):
                    raise TrainingError(f"MLP loss became non-finite at epoch {epoch}")
                total += loss * idx.size
                step += 1
                c1 = 1.0 - ADAM_BETA1 ** step
                c2 = 1.0 - ADAM_BETA2 ** step
                new = []
                for k, ((W, b), (gW, gb)) in enumerate(zip(params, grads)):
                    mW = ADAM_BETA1 * m[k][0] + (1 - ADAM_BETA1) * gW
                    mb = ADAM_BETA1 * m[k][1] + (1 - ADAM_BETA1) * gb
                    vW = ADAM_BETA2 * v[k][0] + (1 - ADAM_BETA2) * gW * gW
                    vb = ADAM_BETA2 * v[k][1] + (1 - ADAM_BETA2) * gb * gb
                    m[k], v[k] = (mW, mb), (vW, vb)
                    W = W - lr * (mW / c1) / (np.sqrt(vW / c2) + ADAM_EPS)
                    b = b - lr * (mb / c1) / (np.sqrt(vb / c2) + ADAM_EPS)
                    new.append((W, b))
                params = new
            epoch_loss = total / n
            log.append(epoch_loss)
            if epoch_loss < best_loss:
                best_loss, best_epoch = epoch_loss, epoch
            elif epoch - best_epoch >= config.patience:
                break
        return cls(params, std, log, best_epoch)

    def probabilities(self, X) -> np.ndarray:
        X = self._check(X)
        if self.standardizer is not None:
            X = self.standardizer(X)
        return forward(self.params, X)[0]

    def score(self, X) -> np.ndarray:
        """Softmax probability of class 1."""
        return self.probabilities(X)[:, 1]

    def to_dict(self) -> dict:
        return {"kind": self.kind,
                "params": [[W.tolist(), b.tolist()] for W, b in self.params],
                "standardizer": None if self.standardizer is None else self.standardizer.to_dict(),
                "training_log": self.training_log, "best_epoch": self.best_epoch}

    @classmethod
    def from_dict(cls, d) -> "MLP":
        std = None if d.get("standardizer") is None else Standardizer.from_dict(d["standardizer"])
        return cls(d["params"], std, d.get("training_log"), d.get("best_epoch"))
