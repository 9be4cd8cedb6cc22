"""Tabular binary-classification datasets for the experiment lab.

Features are min-max normalized to [0, 1] per column at construction time.
Any CSV with a header row and a binary target in the last column loads; a
bundled synthetic generator covers self-contained runs.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import InputError


@dataclass(frozen=True)
class Dataset:
    name: str
    features: np.ndarray  # (n, d) float64 in [0, 1]
    labels: np.ndarray    # (n,) int8

    def __post_init__(self):
        if self.features.ndim != 2 or self.features.shape[1] < 1:
            raise InputError("features must be a non-degenerate 2-D matrix", code="shape")
        if len(self.labels) != len(self.features):
            raise InputError("feature/label row counts differ", code="shape")
        if not np.isin(self.labels, (0, 1)).all():
            raise InputError("labels must be binary", code="label")

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def d(self) -> int:
        return self.features.shape[1]

    def subset(self, idx: np.ndarray, name: str | None = None) -> "Dataset":
        return Dataset(name or self.name, self.features[idx], self.labels[idx])


def _normalize(features: np.ndarray) -> np.ndarray:
    lo = features.min(axis=0)
    span = features.max(axis=0) - lo
    span[span == 0] = 1.0  # constant columns map to 0
    return (features - lo) / span


def from_raw(name: str, features: np.ndarray, labels: np.ndarray) -> Dataset:
    features = np.asarray(features, dtype=np.float64)
    if not np.isfinite(features).all():
        raise InputError("features contain missing or non-finite values", code="missing")
    return Dataset(name, _normalize(features), np.asarray(labels, dtype=np.int8))


def make_moons(n: int = 2000, noise: float = 0.3, seed: int = 0) -> Dataset:
    """Two interleaved half-circles with Gaussian jitter."""
    rng = np.random.default_rng(seed)
    half = n // 2
    t_top = rng.uniform(0.0, np.pi, half)
    t_bot = rng.uniform(0.0, np.pi, n - half)
    top = np.column_stack([np.cos(t_top), np.sin(t_top)])
    bot = np.column_stack([1.0 - np.cos(t_bot), 0.5 - np.sin(t_bot)])
    features = np.vstack([top, bot]) + rng.normal(0.0, noise, (n, 2))
    labels = np.concatenate([np.zeros(half, dtype=np.int8), np.ones(n - half, dtype=np.int8)])
    order = rng.permutation(n)
    return from_raw("moons", features[order], labels[order])


def make_tabular(n: int = 3000, d: int = 12, noise: float = 0.08, seed: int = 0) -> Dataset:
    """Higher-dimensional tabular task labelled by a random shallow teacher.

    Uniform features, a seeded one-hidden-layer teacher draws the class
    boundary (balanced by thresholding at the median score), then ``noise``
    flips a fraction of labels.  The dimensionality makes nearest-neighbour
    counterfactuals model-specific, which is what stresses the ensembles.
    """
    rng = np.random.default_rng(seed)
    X = rng.random((n, d))
    w1 = rng.normal(0.0, 2.0, (d, 8))
    b1 = rng.normal(0.0, 0.5, 8)
    w2 = rng.normal(0.0, 2.0, 8)
    score = np.tanh(X @ w1 + b1) @ w2
    y = (score > np.median(score)).astype(np.int8)
    flip = rng.random(n) < noise
    y = np.where(flip, 1 - y, y).astype(np.int8)
    return from_raw("tabular", X, y)


def load_csv_dataset(path: str | Path) -> Dataset:
    """Header row, last column is the binary target."""
    path = Path(path)
    rows: list[list[float]] = []
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise InputError(f"{path}: empty file", code="schema") from None
        if len(header) < 2:
            raise InputError(f"{path}: need at least one feature column", code="shape")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise InputError(f"{path}:{lineno}: wrong column count", code="shape")
            try:
                rows.append([float(v) for v in row])
            except ValueError:
                raise InputError(
                    f"{path}:{lineno}: non-numeric or missing value", code="missing"
                ) from None
    if not rows:
        raise InputError(f"{path}: no data rows", code="schema")
    arr = np.asarray(rows, dtype=np.float64)
    labels = arr[:, -1]
    if not np.isin(labels, (0.0, 1.0)).all():
        raise InputError(f"{path}: target column must be binary", code="label")
    if len(np.unique(labels)) < 2:
        raise InputError(f"{path}: both classes must be present", code="degenerate")
    return from_raw(path.stem, arr[:, :-1], labels.astype(np.int8))


def split_train_holdout(ds: Dataset, holdout_fraction: float = 0.2, seed: int = 0) -> tuple[Dataset, Dataset]:
    """Seeded shuffle, then an 80/20-style split (holdout last)."""
    rng = np.random.default_rng(seed)
    order = rng.permutation(ds.n)
    cut = ds.n - int(round(ds.n * holdout_fraction))
    if cut < 1 or cut >= ds.n:
        raise InputError("split leaves an empty side", code="shape")
    return ds.subset(order[:cut], ds.name + "-train"), ds.subset(order[cut:], ds.name + "-holdout")
