"""Pure-Python/numpy implementations of the hot kernels.

These are the reference implementations; the compiled extension in
``_ckernels.pyx`` mirrors them operation-for-operation.  Keep the arithmetic
order identical in both when editing.
"""

from __future__ import annotations

import math

import numpy as np

LOSS_LOG = 0
LOSS_HINGE = 1


def scan_ngrams(tokens: list[str], table: dict[str, int], max_n: int = 3):
    """All dictionary hits among contiguous 1..max_n-grams.

    Returns (token offset, n-gram length, entity row) triples in scan order
    (offset-major, length-minor).  Overlapping hits all count.
    """
    out = []
    n_tok = len(tokens)
    for start in range(n_tok):
        limit = min(max_n, n_tok - start)
        gram = tokens[start]
        for n in range(1, limit + 1):
            if n > 1:
                gram = gram + " " + tokens[start + n - 1]
            ent = table.get(gram)
            if ent is not None:
                out.append((start, n, ent))
    return out


def sgd_epoch(X: np.ndarray, y: np.ndarray, w: np.ndarray, b: float,
              order: np.ndarray, t: int, loss: int, alpha: float,
              l1_ratio: float, eta0: float, power_t: float) -> tuple[float, int]:
    """One epoch of per-sample updates for a binary linear problem.

    ``y`` holds +-1 targets, ``order`` the visiting permutation, ``t`` the
    1-based global update counter.  Learning rate eta0/t^power_t; the L2 part
    of the elastic-net penalty joins the gradient step, the L1 part is applied
    as a proximal soft-threshold (so coefficients reach exact zeros).  ``w``
    is updated in place; returns the new intercept and counter.
    """
    l2 = alpha * (1.0 - l1_ratio)
    l1 = alpha * l1_ratio
    for i in order:
        eta = eta0 / float(t) ** power_t
        x = X[i]
        score = float(np.dot(w, x)) + b
        yi = y[i]
        z = yi * score
        if loss == LOSS_LOG:
            if z > 0.0:
                e = math.exp(-z)
                gcoef = -yi * (e / (1.0 + e))
            else:
                gcoef = -yi / (1.0 + math.exp(z))
        else:
            gcoef = -yi if z < 1.0 else 0.0
        w -= eta * (gcoef * x + l2 * w)
        b -= eta * gcoef
        if l1 > 0.0:
            thr = eta * l1
            w[:] = np.sign(w) * np.maximum(np.abs(w) - thr, 0.0)
        t += 1
    return b, t
