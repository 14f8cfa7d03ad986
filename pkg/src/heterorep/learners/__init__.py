"""Classifiers over composed representations, their selection and scoring."""

from .metrics import MetricsRecord, compute_metrics, evaluate
from .model import TrainedModel
from .linear import (
    LOGREG_LAMBDA_GRID,
    SGD_GRID,
    LinearModelSpec,
    train_logreg,
    train_sgd,
)
from .mlp import (
    MLP_DROPOUT_GRID,
    MLP_LR_GRID,
    FIVENET_DEFAULT_WIDTHS,
    LNN_N_GRID,
    SNN_WIDTH_GRID,
    MlpSpec,
    lnn_layer_sizes,
    train_mlp,
)
from .grid import GridTrial, grid_search, trial_table_rows
from .persist import load_model, save_model

__all__ = [
    "MetricsRecord",
    "compute_metrics",
    "evaluate",
    "TrainedModel",
    "LinearModelSpec",
    "train_logreg",
    "train_sgd",
    "LOGREG_LAMBDA_GRID",
    "SGD_GRID",
    "MlpSpec",
    "lnn_layer_sizes",
    "train_mlp",
    "SNN_WIDTH_GRID",
    "LNN_N_GRID",
    "FIVENET_DEFAULT_WIDTHS",
    "MLP_LR_GRID",
    "MLP_DROPOUT_GRID",
    "GridTrial",
    "grid_search",
    "trial_table_rows",
    "save_model",
    "load_model",
]
