"""Accuracy, precision, recall and F1 with binary/macro/weighted averaging.

Degenerate ratios (no predicted positives, no true positives) score 0 and
set the ``degenerate`` flag rather than raising, so sweeps over weak models
keep running.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import EvaluationError

AVERAGING_MODES = ("binary", "macro", "weighted")


@dataclass(frozen=True)
class MetricsRecord:
    accuracy: float
    f1: float
    precision: float
    recall: float
    averaging: str
    degenerate: bool = False

    def as_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "f1": self.f1,
            "precision": self.precision,
            "recall": self.recall,
            "averaging": self.averaging,
            "degenerate": self.degenerate,
        }


def _safe_div(num: float, den: float) -> tuple[float, bool]:
    if den == 0:
        return 0.0, True
    return num / den, False


def compute_metrics(y_true: np.ndarray, y_pred: np.ndarray, n_classes: int,
                    averaging: str = "weighted",
                    positive_class: int = 1) -> MetricsRecord:
    """Score predictions against truth under the chosen averaging."""
    if averaging not in AVERAGING_MODES:
        raise EvaluationError(f"averaging must be one of {AVERAGING_MODES}")
    y_true = np.asarray(y_true, dtype=np.int64)
    y_pred = np.asarray(y_pred, dtype=np.int64)
    if y_true.shape != y_pred.shape or y_true.ndim != 1:
        raise EvaluationError("y_true and y_pred must be 1-D and equally long")
    if y_true.size == 0:
        raise EvaluationError("cannot score an empty label vector")
    if y_true.min() < 0 or y_true.max() >= n_classes:
        raise EvaluationError(
            f"label id {int(y_true.max() if y_true.max() >= n_classes else y_true.min())} "
            f"outside the declared {n_classes}-class set"
        )

    accuracy = float(np.mean(y_true == y_pred))

    precision = np.zeros(n_classes)
    recall = np.zeros(n_classes)
    f1 = np.zeros(n_classes)
    support = np.zeros(n_classes)
    degenerate = False
    for c in range(n_classes):
        tp = float(np.sum((y_pred == c) & (y_true == c)))
        fp = float(np.sum((y_pred == c) & (y_true != c)))
        fn = float(np.sum((y_pred != c) & (y_true == c)))
        support[c] = tp + fn
        precision[c], d1 = _safe_div(tp, tp + fp)
        recall[c], d2 = _safe_div(tp, tp + fn)
        f1[c], d3 = _safe_div(2 * precision[c] * recall[c], precision[c] + recall[c])
        degenerate = degenerate or d1 or d2 or d3

    if averaging == "binary":
        if not (0 <= positive_class < n_classes):
            raise EvaluationError(f"positive class {positive_class} out of range")
        p, r, f = precision[positive_class], recall[positive_class], f1[positive_class]
    elif averaging == "macro":
        p, r, f = precision.mean(), recall.mean(), f1.mean()
    else:
        weights = support / support.sum()
        p = float(precision @ weights)
        r = float(recall @ weights)
        f = float(f1 @ weights)

    return MetricsRecord(
        accuracy=accuracy,
        f1=float(f),
        precision=float(p),
        recall=float(r),
        averaging=averaging,
        degenerate=degenerate,
    )


def evaluate(model, X: np.ndarray, y: np.ndarray, averaging: str = "weighted",
             positive_class: int = 1) -> MetricsRecord:
    """Predict with a trained model and score the predictions."""
    y = np.asarray(y, dtype=np.int64)
    if y.size and (y.min() < 0 or y.max() >= model.n_classes):
        raise EvaluationError(
            f"evaluation labels use id {int(y.max())} unseen by the "
            f"{model.n_classes}-class model"
        )
    y_pred = model.predict(X)
    return compute_metrics(y, y_pred, model.n_classes, averaging, positive_class)
