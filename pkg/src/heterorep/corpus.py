"""Dataset ingestion, label bookkeeping and stratified subsampling.

Datasets arrive as one file per split (TSV, CSV or JSON-lines) with a
caller-supplied column schema, so the four benchmark layouts need no
hardcoding.  Splits are immutable after construction and safe to share
read-only across threads.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import IngestionError, ParameterError, SchemaError

SPLIT_NAMES = ("train", "validation", "test")


@dataclass(frozen=True)
class Document:
    """One classified text plus optional per-field metadata (speaker, party, ...)."""

    id: str
    text: str
    label: str
    metadata: Mapping[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class DatasetSplit:
    """An ordered, immutable sequence of documents under one split name."""

    name: str
    documents: tuple[Document, ...]

    def __len__(self) -> int:
        return len(self.documents)

    def labels(self) -> list[str]:
        return [d.label for d in self.documents]

    def ids(self) -> list[str]:
        return [d.id for d in self.documents]


class LabelSet:
    """Deterministic label -> contiguous class id mapping (first-seen order)."""

    def __init__(self, labels: Iterable[str] = ()):
        self.labels: list[str] = []
        self.index: dict[str, int] = {}
        for lab in labels:
            self.add(lab)

    def add(self, label: str) -> int:
        if label not in self.index:
            self.index[label] = len(self.labels)
            self.labels.append(label)
        return self.index[label]

    def __len__(self) -> int:
        return len(self.labels)

    def __contains__(self, label: str) -> bool:
        return label in self.index

    def class_ids(self, split: DatasetSplit) -> np.ndarray:
        """Integer class ids for a split, in document order."""
        try:
            return np.array([self.index[d.label] for d in split.documents], dtype=np.int64)
        except KeyError as exc:
            raise IngestionError(f"label {exc.args[0]!r} not in declared label set") from None


@dataclass(frozen=True)
class ColumnSchema:
    """Names of the id/text/label columns plus any metadata columns to carry."""

    id: str
    text: str
    label: str
    metadata: tuple[str, ...] = ()


class Dataset:
    """Train/validation/test splits sharing one label set and disjoint ids."""

    def __init__(self, train: DatasetSplit, validation: DatasetSplit, test: DatasetSplit):
        self.splits: dict[str, DatasetSplit] = {
            "train": train,
            "validation": validation,
            "test": test,
        }
        seen: dict[str, str] = {}
        for split in self.splits.values():
            for doc in split.documents:
                if doc.id in seen:
                    raise IngestionError(
                        f"document id {doc.id!r} appears in both "
                        f"{seen[doc.id]!r} and {split.name!r} splits"
                    )
                seen[doc.id] = split.name
        # Label order: first-seen in train, then any new labels from the other splits.
        self.label_set = LabelSet()
        for split_name in SPLIT_NAMES:
            for doc in self.splits[split_name].documents:
                self.label_set.add(doc.label)

    @property
    def train(self) -> DatasetSplit:
        return self.splits["train"]

    @property
    def validation(self) -> DatasetSplit:
        return self.splits["validation"]

    @property
    def test(self) -> DatasetSplit:
        return self.splits["test"]


def _rows_from_tsv(path: Path) -> Iterable[tuple[int, list[str]]]:
    with open(path, encoding="utf-8", newline="") as fh:
        for lineno, line in enumerate(fh, start=1):
            yield lineno, line.rstrip("\r\n").split("\t")


def _rows_from_csv(path: Path) -> Iterable[tuple[int, list[str]]]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        for row in reader:
            yield reader.line_num, row


def _parse_delimited(path: Path, rows: Iterable[tuple[int, list[str]]],
                     schema: ColumnSchema) -> list[Document]:
    it = iter(rows)
    try:
        _, header = next(it)
    except StopIteration:
        raise IngestionError(f"{path}: file is empty (no header row)") from None

    positions: dict[str, int] = {}
    for col in (schema.id, schema.text, schema.label, *schema.metadata):
        hits = [i for i, name in enumerate(header) if name == col]
        if not hits:
            raise SchemaError(f"{path}: required column {col!r} not in header {header}")
        if len(hits) > 1:
            raise SchemaError(f"{path}: column {col!r} appears {len(hits)} times in header")
        positions[col] = hits[0]

    docs: list[Document] = []
    width = len(header)
    for lineno, row in it:
        if len(row) == 1 and row[0] == "":
            continue  # trailing blank line
        if len(row) != width:
            raise IngestionError(
                f"{path}:{lineno}: expected {width} fields, got {len(row)}"
            )
        meta = {m: row[positions[m]] for m in schema.metadata}
        docs.append(Document(
            id=row[positions[schema.id]],
            text=row[positions[schema.text]],
            label=row[positions[schema.label]],
            metadata=meta,
        ))
    return docs


def _parse_jsonl(path: Path, schema: ColumnSchema) -> list[Document]:
    docs: list[Document] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise IngestionError(f"{path}:{lineno}: invalid JSON ({exc.msg})") from None
            if not isinstance(obj, dict):
                raise IngestionError(f"{path}:{lineno}: row is not a JSON object")
            for col in (schema.id, schema.text, schema.label):
                if col not in obj:
                    raise IngestionError(f"{path}:{lineno}: missing field {col!r}")
            text = obj[schema.text]
            if isinstance(text, list):
                # Multi-post authors (one list of texts) become one document.
                text = " ".join(str(t) for t in text)
            elif not isinstance(text, str):
                raise IngestionError(f"{path}:{lineno}: field {schema.text!r} is not text")
            meta = {}
            for m in schema.metadata:
                if m not in obj:
                    raise IngestionError(f"{path}:{lineno}: missing metadata field {m!r}")
                meta[m] = str(obj[m])
            docs.append(Document(
                id=str(obj[schema.id]),
                text=text,
                label=str(obj[schema.label]),
                metadata=meta,
            ))
    return docs


def load_dataset(path: str | Path, format: str, schema: ColumnSchema,
                 split_name: str = "train") -> DatasetSplit:
    """Load one split file, preserving document order.

    ``format`` is one of ``tsv`` (no quoting), ``csv`` (RFC-4180 quoting) or
    ``jsonl``.  Duplicate document ids and malformed rows raise IngestionError
    naming the offender; a missing schema column raises SchemaError.
    """
    path = Path(path)
    if not path.exists():
        raise IngestionError(f"dataset file not found: {path}")
    if split_name not in SPLIT_NAMES:
        raise ParameterError(f"split_name must be one of {SPLIT_NAMES}, got {split_name!r}")

    if format == "tsv":
        docs = _parse_delimited(path, _rows_from_tsv(path), schema)
    elif format == "csv":
        docs = _parse_delimited(path, _rows_from_csv(path), schema)
    elif format == "jsonl":
        docs = _parse_jsonl(path, schema)
    else:
        raise ParameterError(f"unknown dataset format {format!r}")

    seen: set[str] = set()
    for doc in docs:
        if doc.id in seen:
            raise IngestionError(f"{path}: duplicate document id {doc.id!r}")
        seen.add(doc.id)
    return DatasetSplit(name=split_name, documents=tuple(docs))


def stratified_indices(labels: Sequence[str] | np.ndarray, fraction: float,
                       seed: int) -> np.ndarray:
    """Row indices of a per-class largest-remainder sample, in original order.

    Class quotas fraction*count are floored; leftover seats (house size
    round-half-up of fraction*N) go to the largest remainders, ties broken by
    class first-seen order.  Sampling within a class is uniform under
    ``seed`` and the result is bitwise reproducible.
    """
    if not (0.0 < fraction <= 1.0):
        raise ParameterError(f"fraction must be in (0, 1], got {fraction}")

    labels = list(labels)
    n = len(labels)
    by_class: dict[object, list[int]] = {}
    for i, lab in enumerate(labels):
        by_class.setdefault(lab, []).append(i)

    classes = list(by_class)
    quotas = [fraction * len(by_class[c]) for c in classes]
    base = [math.floor(q) for q in quotas]
    house = math.floor(fraction * n + 0.5)
    seats = house - sum(base)
    order = sorted(range(len(classes)), key=lambda j: (-(quotas[j] - base[j]), j))
    take = dict(zip(classes, base))
    for j in order[:seats]:
        take[classes[j]] += 1

    rng = np.random.Generator(np.random.PCG64(seed))
    chosen: list[int] = []
    for c in classes:
        pool = by_class[c]
        k = take[c]
        if k >= len(pool):
            chosen.extend(pool)
        elif k > 0:
            picks = rng.choice(len(pool), size=k, replace=False)
            chosen.extend(pool[int(p)] for p in picks)
    return np.array(sorted(chosen), dtype=np.int64)


def stratified_sample(split: DatasetSplit, fraction: float, seed: int) -> DatasetSplit:
    """Label-stratified subsample of a split, preserving document order."""
    for lab, cnt in label_distribution(split).items():
        if cnt[0] < 1:  # pragma: no cover - empty classes cannot occur in a split
            raise ParameterError(f"class {lab!r} has no documents")
    idx = stratified_indices(split.labels(), fraction, seed)
    return DatasetSplit(name=split.name, documents=tuple(split.documents[i] for i in idx))


def label_distribution(split: DatasetSplit) -> dict[str, tuple[int, float]]:
    """Per-label (count, proportion) in first-seen label order."""
    counts: dict[str, int] = {}
    for doc in split.documents:
        counts[doc.label] = counts.get(doc.label, 0) + 1
    n = len(split)
    return {lab: (c, c / n) for lab, c in counts.items()}
