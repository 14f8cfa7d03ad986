"""Hyperparameter grid search with deterministic trial ordering and seeding.

Trials enumerate the cartesian product of the grid axes in declaration
order.  The winner is the best weighted validation F1; ties go to the model
with fewer parameters, then to the earlier trial.  Failed trials are kept in
the table (flagged) so a sweep survives individual divergence.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass

import numpy as np

from ..errors import TrainingError
from ..seeding import derive_seed
from .linear import LinearModelSpec, train_logreg, train_sgd
from .metrics import MetricsRecord, evaluate
from .mlp import MlpSpec, train_mlp
from .model import TrainedModel

logger = logging.getLogger(__name__)


@dataclass
class GridTrial:
    trial_id: int
    family: str
    params: dict
    metrics: MetricsRecord | None     # validation scores; None when failed
    epochs: int
    n_parameters: int
    model: TrainedModel | None
    error: str = ""


def _grid_points(grid: dict) -> list[dict]:
    axes = list(grid.items())
    names = [name for name, _ in axes]
    return [dict(zip(names, combo)) for combo in itertools.product(*(vals for _, vals in axes))]


def _train_one(family: str, point: dict, X, y, validation, n_classes: int, seed: int):
    if family == "logreg":
        return train_logreg(X, y, n_classes=n_classes, **point)
    if family == "sgd":
        spec = LinearModelSpec(family="sgd", seed=seed, **point)
        return train_sgd(X, y, spec, n_classes=n_classes)
    if family == "mlp":
        spec = MlpSpec(seed=seed, **point)
        return train_mlp(X, y, spec, validation, n_classes=n_classes)
    raise TrainingError(f"unknown learner family {family!r}")


def grid_search(family: str, grid: dict, X: np.ndarray, y: np.ndarray,
                X_val: np.ndarray, y_val: np.ndarray, n_classes: int,
                seed: int = 0, averaging: str = "weighted",
                ) -> tuple[TrainedModel, list[GridTrial]]:
    """Train every grid point; returns (best model, full trial table)."""
    points = _grid_points(grid)
    if not points:
        raise TrainingError("empty hyperparameter grid")

    trials: list[GridTrial] = []
    for i, point in enumerate(points):
        trial_seed = derive_seed(seed, "trial", family, i)
        try:
            model = _train_one(family, point, X, y, (X_val, y_val), n_classes, trial_seed)
            metrics = evaluate(model, X_val, y_val, averaging=averaging)
            trials.append(GridTrial(
                trial_id=i, family=family, params=point, metrics=metrics,
                epochs=model.epochs_trained, n_parameters=model.n_parameters,
                model=model,
            ))
        except TrainingError as exc:
            logger.warning("trial %d (%s %s) failed: %s", i, family, point, exc)
            trials.append(GridTrial(
                trial_id=i, family=family, params=point, metrics=None,
                epochs=0, n_parameters=0, model=None, error=str(exc),
            ))

    scored = [t for t in trials if t.metrics is not None]
    if not scored:
        raise TrainingError(
            f"all {len(trials)} {family} trials failed; "
            f"first error: {trials[0].error}"
        )
    best = min(scored, key=lambda t: (-t.metrics.f1, t.n_parameters, t.trial_id))
    return best.model, trials


def select_best(candidates: list[GridTrial]) -> GridTrial:
    """Cross-family winner under the same F1/size/order tie rules."""
    scored = [t for t in candidates if t.metrics is not None]
    if not scored:
        raise TrainingError("no successful trials to select from")
    return min(scored, key=lambda t: (-t.metrics.f1, t.n_parameters, t.trial_id))


def trial_table_rows(trials: list[GridTrial]) -> list[list[str]]:
    """TSV rows: trial id, family, params, four validation metrics, epochs."""
    rows = [["trial", "family", "params", "val_accuracy", "val_f1",
             "val_precision", "val_recall", "epochs", "status"]]
    for t in trials:
        params = ";".join(f"{k}={t.params[k]}" for k in t.params)
        if t.metrics is None:
            rows.append([str(t.trial_id), t.family, params, "", "", "", "",
                         str(t.epochs), f"failed: {t.error}"])
        else:
            m = t.metrics
            rows.append([
                str(t.trial_id), t.family, params,
                repr(m.accuracy), repr(m.f1), repr(m.precision), repr(m.recall),
                str(t.epochs), "ok",
            ])
    return rows
