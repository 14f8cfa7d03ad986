"""Per-class TF-IDF variance word extraction.

Words whose TF-IDF weight varies most within a class mark vocabulary that
shows up across very different documents of that class.  Variance is the
population variance of the word's TF-IDF column over the class rows; a
single-document class has variance 0 everywhere and is flagged.
"""

from __future__ import annotations

import logging
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from ..errors import ParameterError

logger = logging.getLogger(__name__)


def word_tfidf(token_lists: Sequence[Sequence[str]], max_features: int,
               ) -> tuple[np.ndarray, list[str]]:
    """Dense TF-IDF over the most document-frequent word unigrams.

    Same weighting as the LSA pipeline (smooth idf, L2-normalized rows);
    selection ties break lexicographically.
    """
    if max_features < 1:
        raise ParameterError(f"max_features must be positive, got {max_features}")
    df: dict[str, int] = {}
    for tokens in token_lists:
        for w in set(tokens):
            df[w] = df.get(w, 0) + 1
    if not df:
        raise ParameterError("no words survive preprocessing; empty vocabulary")
    vocab = sorted(df, key=lambda w: (-df[w], w))[:max_features]
    index = {w: j for j, w in enumerate(vocab)}
    n = len(token_lists)
    idf = np.log((1.0 + n) / (1.0 + np.array([df[w] for w in vocab]))) + 1.0

    matrix = np.zeros((n, len(vocab)))
    for i, tokens in enumerate(token_lists):
        for w in tokens:
            j = index.get(w)
            if j is not None:
                matrix[i, j] += 1.0
        matrix[i] *= idf
        norm = np.linalg.norm(matrix[i])
        if norm > 0:
            matrix[i] /= norm
    return matrix, vocab


def class_variance_words(tfidf, vocabulary: Sequence[str], labels: np.ndarray,
                         class_names: Sequence[str], top_k: int,
                         ) -> dict[str, list[tuple[str, float]]]:
    """Top-k (word, variance) per class, descending variance, ties lexicographic."""
    if len(vocabulary) == 0:
        raise ParameterError("empty vocabulary")
    if top_k < 0:
        raise ParameterError(f"top_k must be non-negative, got {top_k}")
    labels = np.asarray(labels, dtype=np.int64)
    if tfidf.shape[0] != labels.size:
        raise ParameterError(
            f"matrix has {tfidf.shape[0]} rows but {labels.size} labels"
        )

    out: dict[str, list[tuple[str, float]]] = {}
    for class_id, class_name in enumerate(class_names):
        mask = labels == class_id
        if not mask.any():
            raise ParameterError(f"class {class_name!r} has no documents")
        rows = tfidf[mask]
        if sp.issparse(rows):
            rows = np.asarray(rows.todense())
        rows = rows.astype(np.float64)
        if rows.shape[0] < 2:
            logger.warning("class %r has %d document(s); variances are all 0",
                           class_name, rows.shape[0])
            variances = np.zeros(rows.shape[1])
        else:
            variances = rows.var(axis=0)
        ranked = sorted(
            range(len(vocabulary)), key=lambda j: (-variances[j], vocabulary[j])
        )
        out[class_name] = [(vocabulary[j], float(variances[j])) for j in ranked[:top_k]]
    return out
