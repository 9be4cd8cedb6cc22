"""Desk-scale experiment factory.

Trains pools of small classifiers under seed and split variation to
manufacture model multiplicity, generates nearest-neighbour counterfactuals,
assembles recourse instances and computes the evaluation metric table.
"""

from .counterfactual import CounterfactualFailure, assemble_instance, nn_counterfactual
from .data import Dataset, load_csv_dataset, make_moons, make_tabular, split_train_holdout
from .experiment import (
    ExperimentConfig,
    ExperimentResult,
    MetricsRow,
    load_config,
    run_experiment,
    write_metrics_csv,
    write_metrics_sidecar,
)
from .figures import render_experiment_figures
from .models import TrainedModel, train_model, train_pool

__all__ = [
    "CounterfactualFailure",
    "assemble_instance",
    "nn_counterfactual",
    "Dataset",
    "load_csv_dataset",
    "make_moons",
    "make_tabular",
    "split_train_holdout",
    "ExperimentConfig",
    "ExperimentResult",
    "MetricsRow",
    "load_config",
    "run_experiment",
    "write_metrics_csv",
    "write_metrics_sidecar",
    "render_experiment_figures",
    "TrainedModel",
    "train_model",
    "train_pool",
]
