"""Unified trained-model container shared by all learner families."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import TrainingError

SELU_ALPHA = 1.6732632423543772848170429916717
SELU_SCALE = 1.0507009873554804934193349852946


def selu(z: np.ndarray) -> np.ndarray:
    return SELU_SCALE * np.where(z > 0, z, SELU_ALPHA * np.expm1(z))


def selu_grad(z: np.ndarray) -> np.ndarray:
    return SELU_SCALE * np.where(z > 0, 1.0, SELU_ALPHA * np.exp(z))


def softmax(z: np.ndarray) -> np.ndarray:
    shifted = z - z.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


@dataclass
class TrainedModel:
    """Fitted weights plus enough bookkeeping to re-evaluate and persist."""

    family: str                      # logreg | sgd | mlp
    params: dict
    n_classes: int
    weights: dict[str, np.ndarray]   # float64 tensors
    labels: tuple[str, ...] = ()
    best_epoch: int = 0
    epochs_trained: int = 0
    val_history: tuple[float, ...] = field(default=(), repr=False)

    @property
    def n_parameters(self) -> int:
        return int(sum(w.size for w in self.weights.values()))

    def decision_scores(self, X: np.ndarray) -> np.ndarray:
        """Per-class scores (N x n_classes); higher wins."""
        X = np.asarray(X, dtype=np.float64)
        if self.family == "logreg":
            return X @ self.weights["W"] + self.weights["b"]
        if self.family == "sgd":
            W, b = self.weights["W"], self.weights["b"]
            if self.n_classes == 2 and W.shape[0] == 1:
                s = X @ W[0] + b[0]
                return np.column_stack([-s, s])
            return X @ W.T + b
        if self.family == "mlp":
            return mlp_forward_logits(self.weights, self.params["hidden_sizes"], X)
        raise TrainingError(f"unknown model family {self.family!r}")

    def predict(self, X: np.ndarray) -> np.ndarray:
        return np.argmax(self.decision_scores(X), axis=1)

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        return softmax(self.decision_scores(X))


def mlp_forward_logits(weights: dict[str, np.ndarray], hidden_sizes: list[int],
                       X: np.ndarray) -> np.ndarray:
    """Inference-mode forward pass (dropout off)."""
    h = np.asarray(X, dtype=np.float64)
    for layer in range(len(hidden_sizes)):
        h = selu(h @ weights[f"W{layer}"] + weights[f"b{layer}"])
    out = len(hidden_sizes)
    return h @ weights[f"W{out}"] + weights[f"b{out}"]
