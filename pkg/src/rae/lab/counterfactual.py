"""Nearest-neighbour counterfactual search and instance assembly."""

from __future__ import annotations

import numpy as np

from ..errors import RAEError, UsageError
from ..instance import RAEInstance
from .data import Dataset
from .models import TrainedModel


class CounterfactualFailure(RAEError):
    """No training point on the other side of the model's decision."""

    exit_code = 3


def _distances(points: np.ndarray, x: np.ndarray, metric: str) -> np.ndarray:
    diff = points - x
    if metric == "l1":
        return np.abs(diff).sum(axis=1)
    if metric == "l2":
        return np.sqrt((diff * diff).sum(axis=1))
    raise UsageError(f"unknown distance metric {metric!r}")


def nn_counterfactual(
    model: TrainedModel,
    ds: Dataset,
    x: np.ndarray,
    metric: str = "l2",
    _preds: np.ndarray | None = None,
) -> np.ndarray:
    """Closest training point (never ``x`` itself) the model labels differently.

    Ties break on the lowest row index.  ``_preds`` short-circuits the model
    evaluation when the caller already scored the training rows.
    """
    x = np.asarray(x, dtype=np.float64)
    preds = model.predict(ds.features) if _preds is None else _preds
    target = 1 - model.predict_one(x)
    mask = preds == target
    mask &= ~(ds.features == x).all(axis=1)
    if not mask.any():
        raise CounterfactualFailure(
            f"no training point classified {target} by the model"
        )
    dist = _distances(ds.features[mask], x, metric)
    rows = np.flatnonzero(mask)
    return ds.features[rows[int(np.argmin(dist))]].copy()


def assemble_instance(
    models: list[TrainedModel],
    ds: Dataset,
    x: np.ndarray,
    metric: str = "l2",
    train_preds: np.ndarray | None = None,
) -> RAEInstance:
    """One recourse instance: every model scored on the input and on every
    model's counterfactual.

    ``train_preds`` is an optional (len(models), ds.n) prediction cache.
    """
    m = len(models)
    ces = np.empty((m, ds.features.shape[1]))
    for i, model in enumerate(models):
        cached = None if train_preds is None else train_preds[i]
        ces[i] = nn_counterfactual(model, ds, x, metric, _preds=cached)
    pred_x = tuple(model.predict_one(x) for model in models)
    pred_ce = tuple(tuple(int(v) for v in model.predict(ces)) for model in models)
    return RAEInstance(
        pred_x=pred_x,
        pred_ce=pred_ce,
        model_meta={
            "accuracy": tuple(model.accuracy for model in models),
            "simplicity": tuple(model.simplicity for model in models),
        },
        ce_features=tuple(tuple(float(v) for v in row) for row in ces),
    )
