"""Small classifiers trained by minibatch gradient descent.

Two families: a logistic-linear model and a one-hidden-layer tanh network.
Multiplicity in a pool comes from per-model parameter seeds and per-model
resampling of the training rows; the architecture cycle also varies the
hidden width, which doubles as the simplicity score.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InputError
from .data import Dataset

# Hidden widths cycled through a pool, and the simplicity score of each.
WIDTH_CYCLE = (4, 6, 8, 12, 16)
SIMPLICITY = {4: 1.0, 6: 0.75, 8: 0.5, 12: 0.25, 16: 0.0}


@dataclass(frozen=True)
class TrainedModel:
    kind: str                     # "linear" | "shallow"
    hidden_width: int             # 0 for linear
    params: tuple[np.ndarray, ...]
    accuracy: float
    simplicity: float
    seed: int

    def scores(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(X)
        if self.kind == "linear":
            w, b = self.params
            return X @ w + b[0]
        w1, b1, w2, b2 = self.params
        return np.tanh(X @ w1 + b1) @ w2 + b2[0]

    def predict(self, X: np.ndarray) -> np.ndarray:
        return (self.scores(X) > 0).astype(np.int8)

    def predict_one(self, x: np.ndarray) -> int:
        return int(self.predict(x.reshape(1, -1))[0])


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def train_model(
    train: Dataset,
    holdout: Dataset,
    kind: str = "shallow",
    hidden_width: int = 8,
    seed: int = 0,
    epochs: int = 40,
    learning_rate: float = 0.5,
    batch_size: int = 32,
    subsample: float = 0.75,
) -> TrainedModel:
    """Fit one classifier on a seeded resample of the training rows.

    Accuracy is measured on the holdout, never on the rows used for fitting.
    """
    if len(np.unique(train.labels)) < 2:
        raise InputError("training data has a constant label", code="degenerate")
    rng = np.random.default_rng(seed)
    take = max(2, int(round(train.n * subsample)))
    rows = rng.choice(train.n, size=take, replace=False)
    X, y = train.features[rows], train.labels[rows].astype(np.float64)
    d = X.shape[1]

    if kind == "linear":
        w = rng.normal(0.0, 0.5, d)
        b = np.zeros(1)
        params = [w, b]
    elif kind == "shallow":
        w1 = rng.normal(0.0, 1.0, (d, hidden_width)) / np.sqrt(d)
        b1 = np.zeros(hidden_width)
        w2 = rng.normal(0.0, 1.0, hidden_width) / np.sqrt(hidden_width)
        b2 = np.zeros(1)
        params = [w1, b1, w2, b2]
    else:
        raise InputError(f"unknown model kind {kind!r}", code="kind")

    n = len(X)
    for _ in range(epochs):
        order = rng.permutation(n)
        for start in range(0, n, batch_size):
            idx = order[start : start + batch_size]
            xb, yb = X[idx], y[idx]
            if kind == "linear":
                w, b = params
                p = _sigmoid(xb @ w + b[0])
                g = p - yb
                w -= learning_rate * (xb.T @ g) / len(idx)
                b -= learning_rate * g.mean()
            else:
                w1, b1, w2, b2 = params
                h = np.tanh(xb @ w1 + b1)
                p = _sigmoid(h @ w2 + b2[0])
                g = p - yb
                gw2 = h.T @ g / len(idx)
                gh = np.outer(g, w2) * (1.0 - h * h)
                w1 -= learning_rate * (xb.T @ gh) / len(idx)
                b1 -= learning_rate * gh.mean(axis=0)
                w2 -= learning_rate * gw2
                b2 -= learning_rate * g.mean()

    frozen = tuple(p.copy() for p in params)
    model = TrainedModel(
        kind=kind,
        hidden_width=hidden_width if kind == "shallow" else 0,
        params=frozen,
        accuracy=0.0,
        simplicity=SIMPLICITY.get(hidden_width, 1.0) if kind == "shallow" else 1.0,
        seed=seed,
    )
    preds = model.predict(holdout.features)
    acc = float((preds == holdout.labels).mean())
    return TrainedModel(
        kind=model.kind,
        hidden_width=model.hidden_width,
        params=frozen,
        accuracy=acc,
        simplicity=model.simplicity,
        seed=seed,
    )


def train_pool(
    train: Dataset,
    holdout: Dataset,
    pool_size: int,
    seed: int = 0,
    epochs: int = 40,
    learning_rate: float = 0.5,
    batch_size: int = 32,
    subsample: float = 0.75,
) -> list[TrainedModel]:
    """A pool of shallow networks cycling through the width schedule.

    Each model gets its own parameter seed and its own resample of the
    training rows, which is where the multiplicity comes from.
    """
    seeds = np.random.SeedSequence(seed).spawn(pool_size)
    pool = []
    for i in range(pool_size):
        width = WIDTH_CYCLE[i % len(WIDTH_CYCLE)]
        child_seed = int(seeds[i].generate_state(1)[0])
        pool.append(
            train_model(
                train,
                holdout,
                kind="shallow",
                hidden_width=width,
                seed=child_seed,
                epochs=epochs,
                learning_rate=learning_rate,
                batch_size=batch_size,
                subsample=subsample,
            )
        )
    return pool
