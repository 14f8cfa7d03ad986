"""Neural stackers: single-hidden-layer, five-layer and halving-schedule nets.

The network is input -> [hidden layers, SELU, dropout after each activation]
-> softmax, trained on cross-entropy with Adam (beta1 0.9, beta2 0.999,
eps 1e-8), minibatches of 32 shuffled per epoch, and early stopping on the
weighted validation F1 with a 10-epoch patience; the best-epoch weights are
restored at the end.  Everything is float64 and explicitly backpropagated,
which is what makes the finite-difference gradient checks meaningful.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ParameterError, TrainingError
from ..seeding import rng_for
from .metrics import compute_metrics
from .model import TrainedModel, selu, selu_grad, softmax

SNN_WIDTH_GRID = (32, 64, 128, 256, 512, 1024, 2048, 4096, 8192, 16384)
LNN_N_GRID = tuple(range(6, 17))
FIVENET_DEFAULT_WIDTHS = (1024, 512, 256, 128, 64)
MLP_LR_GRID = (0.0001, 0.001, 0.005, 0.01, 0.05, 0.1)
MLP_DROPOUT_GRID = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)

ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8


def lnn_layer_sizes(n: int) -> list[int]:
    """Halving hidden-layer schedule 2^n, 2^(n-1), ..., 2."""
    if n < 2:
        raise ParameterError(f"layer schedule needs n >= 2, got {n}")
    return [2 ** k for k in range(n, 0, -1)]


@dataclass(frozen=True)
class MlpSpec:
    arch: str = "snn"                 # snn | fivenet | lnn
    snn_width: int = 128
    lnn_n: int = 6
    fivenet_widths: tuple[int, ...] = FIVENET_DEFAULT_WIDTHS
    lr: float = 0.001
    dropout: float = 0.2              # 0.0 disables dropout
    batch_size: int = 32
    max_epochs: int = 1000
    patience: int = 10
    seed: int = 0

    def __post_init__(self):
        if self.arch not in ("snn", "fivenet", "lnn"):
            raise ParameterError(f"unknown architecture {self.arch!r}")
        if not 0.0 <= self.dropout < 1.0:
            raise ParameterError(f"dropout must lie in [0, 1), got {self.dropout}")
        if self.lr < 0:
            raise ParameterError(f"learning rate must be non-negative, got {self.lr}")
        if self.batch_size < 1 or self.max_epochs < 1 or self.patience < 1:
            raise ParameterError("batch_size, max_epochs and patience must be >= 1")

    @property
    def hidden_sizes(self) -> list[int]:
        if self.arch == "snn":
            return [self.snn_width]
        if self.arch == "fivenet":
            return list(self.fivenet_widths)
        return lnn_layer_sizes(self.lnn_n)


def init_weights(spec: MlpSpec, n_features: int, n_classes: int) -> dict[str, np.ndarray]:
    """LeCun-normal initialization (pairs with SELU), zero biases."""
    rng = rng_for(spec.seed, "mlp-init")
    sizes = [n_features, *spec.hidden_sizes, n_classes]
    weights: dict[str, np.ndarray] = {}
    for layer in range(len(sizes) - 1):
        fan_in = sizes[layer]
        weights[f"W{layer}"] = rng.standard_normal((fan_in, sizes[layer + 1])) / np.sqrt(fan_in)
        weights[f"b{layer}"] = np.zeros(sizes[layer + 1])
    return weights


def loss_and_grads(weights: dict[str, np.ndarray], hidden_sizes: list[int],
                   X: np.ndarray, Y: np.ndarray, dropout: float = 0.0,
                   dropout_rng: np.random.Generator | None = None,
                   ) -> tuple[float, dict[str, np.ndarray]]:
    """Mean cross-entropy and its exact gradients for one batch."""
    n = X.shape[0]
    n_hidden = len(hidden_sizes)

    acts = [np.asarray(X, dtype=np.float64)]
    zs = []
    masks = []
    h = acts[0]
    for layer in range(n_hidden):
        z = h @ weights[f"W{layer}"] + weights[f"b{layer}"]
        zs.append(z)
        h = selu(z)
        if dropout > 0.0:
            mask = (dropout_rng.random(h.shape) >= dropout) / (1.0 - dropout)
            h = h * mask
            masks.append(mask)
        acts.append(h)
    logits = h @ weights[f"W{n_hidden}"] + weights[f"b{n_hidden}"]
    P = softmax(logits)
    loss = -float(np.sum(Y * np.log(np.maximum(P, 1e-300)))) / n

    grads: dict[str, np.ndarray] = {}
    delta = (P - Y) / n
    grads[f"W{n_hidden}"] = acts[-1].T @ delta
    grads[f"b{n_hidden}"] = delta.sum(axis=0)
    for layer in range(n_hidden - 1, -1, -1):
        delta = delta @ weights[f"W{layer + 1}"].T
        if dropout > 0.0:
            delta = delta * masks[layer]
        delta = delta * selu_grad(zs[layer])
        grads[f"W{layer}"] = acts[layer].T @ delta
        grads[f"b{layer}"] = delta.sum(axis=0)
    return loss, grads


def train_mlp(X: np.ndarray, y: np.ndarray, spec: MlpSpec,
              validation: tuple[np.ndarray, np.ndarray],
              n_classes: int | None = None) -> TrainedModel:
    """Train with Adam and restore the weights of the best validation epoch."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    X_val, y_val = validation
    X_val = np.asarray(X_val, dtype=np.float64)
    y_val = np.asarray(y_val, dtype=np.int64)
    if X_val.shape[0] == 0:
        raise TrainingError("validation set is empty")
    seen = int(max(y.max(), y_val.max())) + 1
    L = n_classes if n_classes is not None else seen
    if seen > L:
        raise TrainingError(f"labels use {seen} classes but n_classes={L}")
    if np.unique(y).size < 2:
        raise TrainingError("training labels contain a single class")

    n, d = X.shape
    Y = np.zeros((n, L))
    Y[np.arange(n), y] = 1.0
    hidden = spec.hidden_sizes

    weights = init_weights(spec, d, L)
    adam_m = {k: np.zeros_like(v) for k, v in weights.items()}
    adam_v = {k: np.zeros_like(v) for k, v in weights.items()}
    adam_t = 0

    rng = rng_for(spec.seed, "mlp-train")
    model = TrainedModel(
        family="mlp",
        params={
            "arch": spec.arch,
            "hidden_sizes": hidden,
            "lr": spec.lr,
            "dropout": spec.dropout,
            "batch_size": spec.batch_size,
            "max_epochs": spec.max_epochs,
            "patience": spec.patience,
            "seed": spec.seed,
        },
        n_classes=L,
        weights=weights,
    )

    best_f1 = -np.inf
    best_epoch = 0
    best_weights = {k: v.copy() for k, v in weights.items()}
    stale = 0
    history = []
    epoch = 0
    for epoch in range(1, spec.max_epochs + 1):
        order = rng.permutation(n)
        for start in range(0, n, spec.batch_size):
            batch = order[start:start + spec.batch_size]
            loss, grads = loss_and_grads(
                weights, hidden, X[batch], Y[batch],
                dropout=spec.dropout, dropout_rng=rng,
            )
            if not np.isfinite(loss):
                raise TrainingError(
                    f"non-finite loss at epoch {epoch}, batch {start // spec.batch_size}"
                )
            adam_t += 1
            bc1 = 1.0 - ADAM_BETA1 ** adam_t
            bc2 = 1.0 - ADAM_BETA2 ** adam_t
            for k, g in grads.items():
                adam_m[k] = ADAM_BETA1 * adam_m[k] + (1.0 - ADAM_BETA1) * g
                adam_v[k] = ADAM_BETA2 * adam_v[k] + (1.0 - ADAM_BETA2) * (g * g)
                weights[k] -= spec.lr * (adam_m[k] / bc1) / (np.sqrt(adam_v[k] / bc2) + ADAM_EPS)

        val_pred = model.predict(X_val)
        val_f1 = compute_metrics(y_val, val_pred, L, averaging="weighted").f1
        history.append(val_f1)
        if val_f1 > best_f1:
            best_f1 = val_f1
            best_epoch = epoch
            best_weights = {k: v.copy() for k, v in weights.items()}
            stale = 0
        else:
            stale += 1
            if stale >= spec.patience:
                break

    model.weights = best_weights
    model.best_epoch = best_epoch
    model.epochs_trained = epoch
    model.val_history = tuple(history)
    return model
