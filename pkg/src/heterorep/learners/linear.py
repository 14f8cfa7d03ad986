"""Linear classifiers: L2 logistic regression and elastic-net SGD.

Logistic regression is multinomial, minimizing mean cross-entropy plus
(lambda/2)*||W||^2 (intercept unpenalized) by full-batch gradient descent
with Armijo backtracking, stopping once the gradient infinity-norm drops
below tolerance.  The SGD learner does per-sample updates with learning
rate eta0/t^power_t and an elastic-net penalty whose L1 part is applied as
a proximal soft-threshold; multiclass problems train one-vs-rest.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .. import kernels
from ..errors import ParameterError, TrainingError
from ..seeding import rng_for
from .model import TrainedModel, softmax

LOGREG_LAMBDA_GRID = (0.1, 0.01, 0.001)

SGD_GRID = {
    "loss": ("log", "hinge"),
    "alpha": (0.01, 0.001, 0.0001, 0.0005),
    "l1_ratio": (0.05, 0.25, 0.3, 0.6, 0.8, 0.95),
    "power_t": (0.1, 0.5, 0.9),
}


@dataclass(frozen=True)
class LinearModelSpec:
    family: str = "sgd"              # logreg | sgd
    loss: str = "log"                # log | hinge (sgd only)
    l2_lambda: float = 0.01          # logreg only
    alpha: float = 0.0001
    l1_ratio: float = 0.15
    power_t: float = 0.5
    eta0: float = 0.01
    max_epochs: int = 20
    seed: int = 0

    def __post_init__(self):
        if self.family not in ("logreg", "sgd"):
            raise ParameterError(f"unknown linear family {self.family!r}")
        if self.loss not in ("log", "hinge"):
            raise ParameterError(f"unknown SGD loss {self.loss!r}")
        if not 0.0 <= self.l1_ratio <= 1.0:
            raise ParameterError(f"l1_ratio must lie in [0, 1], got {self.l1_ratio}")
        if self.alpha <= 0:
            raise ParameterError(f"alpha must be positive, got {self.alpha}")


def _check_training_inputs(X: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray, int]:
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if X.ndim != 2 or X.shape[0] != y.shape[0]:
        raise TrainingError(f"X {X.shape} and y {y.shape} do not align")
    if not np.all(np.isfinite(X)):
        raise TrainingError("training matrix contains NaN/Inf")
    classes = np.unique(y)
    if classes.size < 2:
        raise TrainingError("training labels contain a single class")
    if classes.min() < 0:
        raise TrainingError("negative class id in training labels")
    return X, y, int(classes.max()) + 1


def _logreg_loss(X, Y, W, b, lam):
    n = X.shape[0]
    P = softmax(X @ W + b)
    # clipping only inside the log; P itself feeds the exact gradient
    ll = -float(np.sum(Y * np.log(np.maximum(P, 1e-300)))) / n
    return ll + 0.5 * lam * float(np.sum(W * W)), P


def _logreg_grads(X, Y, P, W, lam):
    n = X.shape[0]
    G = (P - Y) / n
    return X.T @ G + lam * W, G.sum(axis=0)


def train_logreg(X: np.ndarray, y: np.ndarray, l2_lambda: float,
                 n_classes: int | None = None, max_epochs: int = 500,
                 tol: float = 1e-6) -> TrainedModel:
    """Fit multinomial logistic regression by line-searched gradient descent."""
    X, y, seen = _check_training_inputs(X, y)
    L = n_classes if n_classes is not None else seen
    if seen > L:
        raise TrainingError(f"labels use {seen} classes but n_classes={L}")
    n, d = X.shape
    Y = np.zeros((n, L))
    Y[np.arange(n), y] = 1.0

    W = np.zeros((d, L))
    b = np.zeros(L)
    step = 1.0
    loss, P = _logreg_loss(X, Y, W, b, l2_lambda)
    grad_W, grad_b = _logreg_grads(X, Y, P, W, l2_lambda)
    history = [loss]
    epochs = 0
    for epochs in range(1, max_epochs + 1):
        gnorm = max(np.abs(grad_W).max() if grad_W.size else 0.0, np.abs(grad_b).max())
        if gnorm < tol:
            epochs -= 1
            break
        # Armijo backtracking along the negative gradient; gradients are
        # recomputed only at the accepted point
        sq = float(np.sum(grad_W * grad_W) + np.sum(grad_b * grad_b))
        step = min(step * 2.0, 1e6)
        accepted = False
        for _ in range(60):
            W_try = W - step * grad_W
            b_try = b - step * grad_b
            loss_try, P_try = _logreg_loss(X, Y, W_try, b_try, l2_lambda)
            if loss_try <= loss - 1e-4 * step * sq:
                W, b, loss = W_try, b_try, loss_try
                grad_W, grad_b = _logreg_grads(X, Y, P_try, W, l2_lambda)
                accepted = True
                break
            step *= 0.5
        if not accepted:
            break
        history.append(loss)

    return TrainedModel(
        family="logreg",
        params={"l2_lambda": l2_lambda, "max_epochs": max_epochs, "tol": tol},
        n_classes=L,
        weights={"W": W, "b": b},
        best_epoch=epochs,
        epochs_trained=epochs,
        val_history=tuple(history),
    )


def train_sgd(X: np.ndarray, y: np.ndarray, spec: LinearModelSpec,
              n_classes: int | None = None) -> TrainedModel:
    """Fit the per-sample SGD learner (one-vs-rest above two classes)."""
    X, y, seen = _check_training_inputs(X, y)
    L = n_classes if n_classes is not None else seen
    if seen > L:
        raise TrainingError(f"labels use {seen} classes but n_classes={L}")
    n, d = X.shape
    loss_id = kernels.LOSS_LOG if spec.loss == "log" else kernels.LOSS_HINGE

    problems = [1] if L == 2 else list(range(L))
    W = np.zeros((len(problems), d))
    bs = np.zeros(len(problems))
    for row, cls in enumerate(problems):
        y_signed = np.where(y == cls, 1.0, -1.0)
        w = W[row]
        b = 0.0
        t = 1
        rng = rng_for(spec.seed, "sgd", cls)
        for _ in range(spec.max_epochs):
            order = rng.permutation(n).astype(np.int64)
            b, t = kernels.sgd_epoch(X, y_signed, w, b, order, t, loss_id,
                                     spec.alpha, spec.l1_ratio, spec.eta0,
                                     spec.power_t)
        bs[row] = b

    return TrainedModel(
        family="sgd",
        params={
            "loss": spec.loss,
            "alpha": spec.alpha,
            "l1_ratio": spec.l1_ratio,
            "power_t": spec.power_t,
            "eta0": spec.eta0,
            "max_epochs": spec.max_epochs,
            "seed": spec.seed,
        },
        n_classes=L,
        weights={"W": W, "b": bs},
        best_epoch=spec.max_epochs,
        epochs_trained=spec.max_epochs,
    )


def learning_rate(eta0: float, power_t: float, t: int) -> float:
    """The step size used at global update t (1-based)."""
    return eta0 / float(t) ** power_t
