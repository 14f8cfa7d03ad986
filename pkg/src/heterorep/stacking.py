"""Representation blocks, scenario composition and normalization.

Blocks are named N x D float32 matrices with row i belonging to document i
of one split.  The DRM file is the single exchange format in and out of the
pipeline::

    magic "DRM1" | u64 rows | u64 cols (little-endian) | float32 LE row-major
    sidecar <file>.ids: one document id per line, same order

Scenarios pick a subset of registered blocks; composition is horizontal
concatenation in registration order, with a column attribution map the
analysis stage consumes.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    AlignmentError,
    CompositionError,
    FormatError,
    IntegrityError,
    ParameterError,
)

DRM_MAGIC = b"DRM1"

BLOCK_KINDS = ("text", "kg", "kg-entity")


def write_drm(path: str | Path, matrix: np.ndarray, ids: Sequence[str]) -> None:
    """Write a matrix and its id sidecar; refuses malformed shapes."""
    matrix = np.ascontiguousarray(matrix, dtype="<f4")
    if matrix.ndim != 2 or matrix.shape[1] < 1:
        raise FormatError(f"refusing to write matrix of shape {matrix.shape}")
    if matrix.shape[0] != len(ids):
        raise AlignmentError(
            f"{matrix.shape[0]} rows but {len(ids)} ids for {path}"
        )
    path = Path(path)
    with open(path, "wb") as fh:
        fh.write(DRM_MAGIC)
        fh.write(struct.pack("<QQ", matrix.shape[0], matrix.shape[1]))
        fh.write(matrix.tobytes())
    with open(str(path) + ".ids", "w", encoding="utf-8") as fh:
        for doc_id in ids:
            fh.write(doc_id + "\n")


def read_drm_header(path: str | Path) -> tuple[int, int]:
    with open(path, "rb") as fh:
        if fh.read(4) != DRM_MAGIC:
            raise FormatError(f"{path}: not a DRM file (bad magic)")
        rows, cols = struct.unpack("<QQ", fh.read(16))
    return int(rows), int(cols)


def read_drm(path: str | Path) -> tuple[np.ndarray, list[str] | None]:
    """Load matrix plus ids (None when no sidecar exists)."""
    path = Path(path)
    with open(path, "rb") as fh:
        if fh.read(4) != DRM_MAGIC:
            raise FormatError(f"{path}: not a DRM file (bad magic)")
        rows, cols = struct.unpack("<QQ", fh.read(16))
        if cols < 1:
            raise FormatError(f"{path}: malformed DRM with {cols} columns")
        payload = fh.read(4 * rows * cols)
        if len(payload) != 4 * rows * cols:
            raise FormatError(f"{path}: truncated payload "
                              f"({len(payload)} of {4 * rows * cols} bytes)")
        matrix = np.frombuffer(payload, dtype="<f4").reshape(rows, cols).copy()
    sidecar = Path(str(path) + ".ids")
    ids = None
    if sidecar.exists():
        ids = sidecar.read_text("utf-8").splitlines()
    return matrix, ids


@dataclass(frozen=True)
class RepresentationBlock:
    name: str
    kind: str
    matrix: np.ndarray  # N x D float32

    @property
    def dim(self) -> int:
        return self.matrix.shape[1]


@dataclass(frozen=True)
class Scenario:
    name: str
    blocks: tuple[str, ...]


class BlockRegistry:
    """Write-once registry of blocks aligned to one split's document ids."""

    def __init__(self, ids: Sequence[str]):
        self.ids = list(ids)
        self._blocks: dict[str, RepresentationBlock] = {}
        self._frozen = False

    def register(self, name: str, kind: str, matrix: np.ndarray) -> RepresentationBlock:
        if self._frozen:
            raise CompositionError("registry is frozen; registration phase is over")
        if name in self._blocks:
            raise CompositionError(f"block {name!r} already registered")
        if kind not in BLOCK_KINDS:
            raise ParameterError(f"block kind must be one of {BLOCK_KINDS}, got {kind!r}")
        matrix = np.ascontiguousarray(matrix, dtype=np.float32)
        if matrix.ndim != 2 or matrix.shape[1] < 1:
            raise FormatError(f"block {name!r} has malformed shape {matrix.shape}")
        if matrix.shape[0] != len(self.ids):
            raise AlignmentError(
                f"block {name!r} has {matrix.shape[0]} rows, dataset has {len(self.ids)}"
            )
        if not np.all(np.isfinite(matrix)):
            raise IntegrityError(f"block {name!r} contains NaN/Inf")
        block = RepresentationBlock(name=name, kind=kind, matrix=matrix)
        self._blocks[name] = block
        return block

    def register_file(self, name: str, kind: str, path: str | Path) -> RepresentationBlock:
        matrix, ids = read_drm(path)
        if ids is not None:
            if len(ids) != len(self.ids):
                raise AlignmentError(
                    f"{path}: sidecar has {len(ids)} ids, dataset has {len(self.ids)}"
                )
            for ours, theirs in zip(self.ids, ids):
                if ours != theirs:
                    raise AlignmentError(
                        f"{path}: id sidecar diverges from dataset at id {theirs!r} "
                        f"(expected {ours!r})"
                    )
        return self.register(name, kind, matrix)

    def freeze(self) -> None:
        self._frozen = True

    def __contains__(self, name: str) -> bool:
        return name in self._blocks

    def __getitem__(self, name: str) -> RepresentationBlock:
        return self._blocks[name]

    def names(self) -> list[str]:
        return list(self._blocks)

    def kinds(self) -> dict[str, str]:
        return {b.name: b.kind for b in self._blocks.values()}

    def scenario(self, name: str, blocks: Iterable[str] | None = None) -> Scenario:
        """Resolve a scenario: built-ins by kind, or an explicit block subset."""
        if blocks is None:
            by_kind = self.kinds()
            if name == "LM":
                keep = [n for n, k in by_kind.items() if k == "text"]
            elif name == "KG":
                keep = [n for n, k in by_kind.items() if k == "kg"]
            elif name == "LM+KG":
                keep = [n for n, k in by_kind.items() if k in ("text", "kg")]
            elif name == "LM+KG+KG-ENTITY":
                keep = list(by_kind)
            else:
                raise ParameterError(f"unknown built-in scenario {name!r}")
        else:
            requested = set(blocks)
            missing = requested - set(self._blocks)
            if missing:
                raise CompositionError(
                    f"scenario {name!r} names unregistered blocks: {sorted(missing)}"
                )
            # canonical order: registration order filtered by the subset
            keep = [n for n in self._blocks if n in requested]
        if not keep:
            raise CompositionError(f"scenario {name!r} selects no blocks")
        return Scenario(name=name, blocks=tuple(keep))


def compose(scenario: Scenario, registry: BlockRegistry
            ) -> tuple[np.ndarray, list[tuple[str, int, int]]]:
    """Concatenate scenario blocks; returns the matrix and [start, stop) ranges."""
    missing = [n for n in scenario.blocks if n not in registry]
    if missing:
        raise CompositionError(f"blocks not registered: {missing}")
    mats = []
    attribution: list[tuple[str, int, int]] = []
    start = 0
    n_rows = {registry[n].matrix.shape[0] for n in scenario.blocks}
    if len(n_rows) > 1:
        raise CompositionError(
            f"blocks disagree on row count: "
            f"{ {n: registry[n].matrix.shape[0] for n in scenario.blocks} }"
        )
    for name in scenario.blocks:
        m = registry[name].matrix
        mats.append(m)
        attribution.append((name, start, start + m.shape[1]))
        start += m.shape[1]
    return np.hstack(mats), attribution


@dataclass(frozen=True)
class Standardizer:
    """Per-column z-scoring statistics fitted on train rows only.

    Zero-variance columns store (mean 0, std 1) so they pass through
    unchanged instead of collapsing or dividing by zero.
    """

    mean: np.ndarray
    std: np.ndarray


def fit_standardizer(train: np.ndarray) -> Standardizer:
    if train.ndim != 2 or train.shape[0] == 0:
        raise ParameterError("standardizer needs a non-empty 2-D train matrix")
    mean = train.mean(axis=0, dtype=np.float64)
    std = np.sqrt(train.astype(np.float64).var(axis=0))
    constant = std == 0.0
    mean = np.where(constant, 0.0, mean)
    std = np.where(constant, 1.0, std)
    return Standardizer(mean=mean, std=std)


def apply_standardizer(standardizer: Standardizer, matrix: np.ndarray) -> np.ndarray:
    if matrix.shape[1] != standardizer.mean.shape[0]:
        raise CompositionError(
            f"matrix has {matrix.shape[1]} columns, standardizer fitted on "
            f"{standardizer.mean.shape[0]}"
        )
    return (matrix.astype(np.float64) - standardizer.mean) / standardizer.std
