"""Concept extraction and embedding aggregation.

A document's concepts are every dictionary hit among its contiguous 1-, 2-
and 3-grams; overlapping hits all count (a bigram match does not consume its
unigrams).  The document vector is the unweighted mean of the matched entity
embeddings, summed in ascending row order so the result is bitwise
permutation-invariant; no match at all gives the zero vector.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .. import kernels
from ..errors import IntegrityError
from .aliases import AliasDictionary, EntityEmbeddingStore
from .preprocess import preprocess_kg


@dataclass(frozen=True)
class ConceptSet:
    """Matched entities of one document.

    ``concepts`` is the deduplicated entity set in ascending row order;
    ``spans``/``matches`` keep every raw hit (token offset, n-gram length,
    entity) in scan order for span reporting and the multiset mode.
    """

    doc_id: str
    concepts: tuple[int, ...]
    spans: tuple[tuple[int, int], ...]
    matches: tuple[int, ...]

    @property
    def empty(self) -> bool:
        return not self.concepts


def match_concepts(tokens: Sequence[str], dictionary: AliasDictionary,
                   doc_id: str = "", longest_only: bool = False) -> ConceptSet:
    """Exact n-gram alignment of preprocessed tokens against the dictionary."""
    hits = kernels.scan_ngrams(list(tokens), dictionary.alias_to_row,
                               dictionary.max_ngram)
    if longest_only and hits:
        kept = []
        for s, n, e in hits:
            covered = any(
                n2 > n and s2 <= s and s2 + n2 >= s + n for s2, n2, _ in hits
            )
            if not covered:
                kept.append((s, n, e))
        hits = kept
    return ConceptSet(
        doc_id=doc_id,
        concepts=tuple(sorted({e for _, _, e in hits})),
        spans=tuple((s, n) for s, n, _ in hits),
        matches=tuple(e for _, _, e in hits),
    )


def agg_average(concepts: ConceptSet, store: EntityEmbeddingStore,
                multiset: bool = False) -> np.ndarray:
    """Unweighted mean of the matched entity embeddings (float64).

    Set semantics by default; ``multiset=True`` weights entities by their
    match count instead.  Empty concept sets give the zero vector.
    """
    rows = sorted(concepts.matches) if multiset else concepts.concepts
    out = np.zeros(store.dim, dtype=np.float64)
    if not rows:
        return out
    for r in rows:
        if r < 0 or r >= store.n_entities:
            raise IntegrityError(
                f"entity index {r} out of range for store with {store.n_entities} rows"
            )
        out += store.matrix[r]
    out /= len(rows)
    return out


def entity_concepts(metadata: Mapping[str, str], dictionary: AliasDictionary,
                    doc_id: str = "") -> ConceptSet:
    """Entities matched from metadata values (whole string and 1..3-grams, unioned)."""
    found: set[int] = set()
    for value in metadata.values():
        tokens = preprocess_kg(value)
        if not tokens:
            continue
        whole = " ".join(tokens)
        row = dictionary.alias_to_row.get(whole)
        if row is not None:
            found.add(row)
        for _, _, e in kernels.scan_ngrams(tokens, dictionary.alias_to_row,
                                           dictionary.max_ngram):
            found.add(e)
    return ConceptSet(doc_id=doc_id, concepts=tuple(sorted(found)), spans=(),
                      matches=tuple(sorted(found)))


def entity_repr(metadata: Mapping[str, str], dictionary: AliasDictionary,
                store: EntityEmbeddingStore) -> np.ndarray:
    """Document vector from metadata fields instead of body text.

    Every metadata value is normalized and looked up both as a whole string
    and as 1..3-grams; all hits pool into one mean.  No hits anywhere (or no
    metadata at all) falls back to the zero vector.
    """
    return agg_average(entity_concepts(metadata, dictionary), store)


@dataclass
class ConceptStats:
    """Per-split concept frequency and coverage report."""

    split_name: str
    n_documents: int
    n_covered: int                      # documents with >= 1 concept
    top_concepts: list[tuple[str, int]]  # (display name, document frequency)
    histogram: dict[int, int]           # concepts-per-document -> n documents

    @property
    def coverage(self) -> float:
        return self.n_covered / self.n_documents if self.n_documents else 0.0


def concept_stats(split_concepts: Mapping[str, Iterable[ConceptSet]],
                  dictionary: AliasDictionary, top_k: int = 10) -> list[ConceptStats]:
    """Frequency/coverage summary over already-matched concept sets.

    Frequency is document frequency over the deduplicated per-document sets,
    matching the set semantics of the aggregation.  Ties in the top-k break
    by display name.
    """
    reports = []
    for split_name, concept_sets in split_concepts.items():
        counts: dict[int, int] = {}
        histogram: dict[int, int] = {}
        n_docs = 0
        n_covered = 0
        for cs in concept_sets:
            n_docs += 1
            k = len(cs.concepts)
            histogram[k] = histogram.get(k, 0) + 1
            if not cs.empty:
                n_covered += 1
            for row in cs.concepts:
                counts[row] = counts.get(row, 0) + 1
        named = [(dictionary.row_names[row], c) for row, c in counts.items()]
        named.sort(key=lambda item: (-item[1], item[0]))
        reports.append(ConceptStats(
            split_name=split_name,
            n_documents=n_docs,
            n_covered=n_covered,
            top_concepts=named[:top_k],
            histogram=dict(sorted(histogram.items())),
        ))
    return reports
