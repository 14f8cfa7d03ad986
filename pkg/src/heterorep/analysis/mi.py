"""Mutual-information feature ranking with per-block attribution.

Columns are discretized by equal-frequency binning (quantile edges, merged
where ties collapse them) and scored with the plug-in estimator
sum p(b,c) ln[p(b,c) / (p(b)p(c))], in nats.  The estimator is deterministic
and dependency-free; ranking, not absolute MI, is what the attribution
consumes.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from ..errors import ParameterError


def bin_column(column: np.ndarray, bins: int) -> np.ndarray:
    """Equal-frequency bin ids (<= bins distinct values; constant column -> one bin)."""
    if bins < 2:
        raise ParameterError(f"need at least 2 bins, got {bins}")
    qs = np.quantile(column, [i / bins for i in range(1, bins)])
    edges = np.unique(qs)
    return np.searchsorted(edges, column, side="right")


def discrete_mi(a: np.ndarray, b: np.ndarray) -> float:
    """Plug-in MI (nats) between two integer-coded variables."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    n = a.size
    _, a_ids = np.unique(a, return_inverse=True)
    _, b_ids = np.unique(b, return_inverse=True)
    n_a = int(a_ids.max()) + 1
    n_b = int(b_ids.max()) + 1
    joint = np.zeros((n_a, n_b))
    np.add.at(joint, (a_ids, b_ids), 1.0)
    joint /= n
    pa = joint.sum(axis=1)
    pb = joint.sum(axis=0)
    nz = joint > 0
    denom = np.outer(pa, pb)
    return float(np.sum(joint[nz] * np.log(joint[nz] / denom[nz])))


def mutual_information(column: np.ndarray, labels: np.ndarray, bins: int = 16) -> float:
    """MI (nats) between one real column and the class labels."""
    column = np.asarray(column, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    if column.shape != labels.shape or column.size < 2:
        raise ParameterError("column and labels must be 1-D, equal length, size >= 2")
    return discrete_mi(bin_column(column, bins), labels)


@dataclass
class FeatureRanking:
    scores: np.ndarray      # per-column MI, original column order
    order: np.ndarray       # column indices, best first (ties by column index)

    def top(self, k: int) -> np.ndarray:
        return self.order[:k]


def rank_and_attribute(matrix: np.ndarray, attribution: list[tuple[str, int, int]],
                       labels: np.ndarray, k: int = 200, bins: int = 16,
                       ) -> tuple[FeatureRanking, dict[str, int]]:
    """Rank all columns by MI and count block membership among the top k.

    Counts cover every block (zero when absent from the top k) and sum to
    the effective k, which is clamped to the column count with a warning.
    """
    n_cols = matrix.shape[1]
    spans = sorted(attribution, key=lambda item: item[1])
    covered = [(start, stop) for _, start, stop in spans]
    pos = 0
    for start, stop in covered:
        if start != pos:
            raise ParameterError("attribution map does not partition the columns")
        pos = stop
    if pos != n_cols:
        raise ParameterError(
            f"attribution covers {pos} columns, matrix has {n_cols}"
        )
    if k > n_cols:
        warnings.warn(f"top-k {k} exceeds {n_cols} columns; clamping", stacklevel=2)
        k = n_cols
    if k < 0:
        raise ParameterError(f"k must be non-negative, got {k}")

    scores = np.array([
        mutual_information(matrix[:, j], labels, bins) for j in range(n_cols)
    ])
    order = np.lexsort((np.arange(n_cols), -scores))
    ranking = FeatureRanking(scores=scores, order=order)

    counts = {name: 0 for name, _, _ in attribution}
    starts = np.array([start for _, start, _ in spans])
    names = [name for name, _, _ in spans]
    for col in ranking.top(k):
        block = names[int(np.searchsorted(starts, col, side="right")) - 1]
        counts[block] += 1
    return ranking, counts
