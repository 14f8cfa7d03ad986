"""Pretrained entity-embedding stores and the alias lookup built over them.

Two interchangeable on-disk layouts exist; both loaders normalize aliases
with :func:`preprocess_kg` so the dictionary side matches the document side
exactly.

Text layout::

    #method=TransE dim=512 count=12345
    Donald Trump<TAB>0.12 -0.5 ...    (dim floats)

Binary layout (all little-endian)::

    magic "ENT1" | u64 count | u64 dim | u32 len + UTF-8 method tag
    count x (u32 len + UTF-8 alias) | float32 row-major count x dim matrix
"""

from __future__ import annotations

import logging
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..errors import FormatError, IntegrityError
from .preprocess import preprocess_kg

logger = logging.getLogger(__name__)

_MAGIC = b"ENT1"

KG_METHODS = ("TransE", "DistMult", "ComplEx", "RotatE", "QuatE", "SimplE")


@dataclass
class EntityEmbeddingStore:
    """Dense float32 entity matrix tagged with its embedding method."""

    matrix: np.ndarray
    method: str

    def __post_init__(self):
        self.matrix = np.ascontiguousarray(self.matrix, dtype=np.float32)
        if self.matrix.ndim != 2:
            raise FormatError("entity matrix must be 2-dimensional")
        if not np.all(np.isfinite(self.matrix)):
            raise IntegrityError(f"entity matrix for {self.method!r} contains NaN/Inf")

    @property
    def n_entities(self) -> int:
        return self.matrix.shape[0]

    @property
    def dim(self) -> int:
        return self.matrix.shape[1]


@dataclass
class AliasDictionary:
    """Preprocessed alias -> entity row, plus a display name per row."""

    alias_to_row: dict[str, int]
    row_names: list[str]
    dim: int
    max_ngram: int = 3
    raw_aliases: list[str] = field(default_factory=list, repr=False)

    @property
    def n_entities(self) -> int:
        return len(self.row_names)


def _build(raw_aliases: list[str], matrix: np.ndarray, method: str,
           source: str) -> tuple[AliasDictionary, EntityEmbeddingStore]:
    store = EntityEmbeddingStore(matrix=matrix, method=method)
    alias_to_row: dict[str, int] = {}
    row_names: list[str] = []
    dropped = 0
    collisions = 0
    for row, raw in enumerate(raw_aliases):
        key = " ".join(preprocess_kg(raw))
        row_names.append(key if key else raw)
        if not key:
            dropped += 1
            continue
        if key in alias_to_row:
            collisions += 1
            continue  # first occurrence wins
        alias_to_row[key] = row
    if dropped:
        logger.warning("%s: %d aliases normalized to empty and are unreachable",
                       source, dropped)
    if collisions:
        logger.warning("%s: %d alias collisions resolved to first occurrence",
                       source, collisions)
    return (
        AliasDictionary(alias_to_row=alias_to_row, row_names=row_names,
                        dim=store.dim, raw_aliases=list(raw_aliases)),
        store,
    )


def load_entity_text(path: str | Path) -> tuple[AliasDictionary, EntityEmbeddingStore]:
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        if not header.startswith("#"):
            raise FormatError(f"{path}:1: missing '#method=... dim=... count=...' header")
        fields = dict(
            part.split("=", 1) for part in header[1:].split() if "=" in part
        )
        try:
            method = fields["method"]
            dim = int(fields["dim"])
            count = int(fields["count"])
        except (KeyError, ValueError):
            raise FormatError(f"{path}:1: header must carry method, dim and count") from None
        if method not in KG_METHODS:
            raise FormatError(f"{path}:1: unknown embedding method {method!r}")

        aliases: list[str] = []
        rows = np.empty((count, dim), dtype=np.float32)
        n = 0
        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            if n >= count:
                raise FormatError(f"{path}:{lineno}: more rows than header count {count}")
            alias, _, payload = line.rstrip("\n").partition("\t")
            values = payload.split()
            if len(values) != dim:
                raise FormatError(
                    f"{path}:{lineno}: expected {dim} values, got {len(values)}"
                )
            try:
                rows[n] = [float(v) for v in values]
            except ValueError:
                raise FormatError(f"{path}:{lineno}: non-numeric embedding value") from None
            aliases.append(alias)
            n += 1
        if n != count:
            raise FormatError(f"{path}: header count {count} but {n} rows present")
    return _build(aliases, rows, method, str(path))


def load_entity_binary(path: str | Path) -> tuple[AliasDictionary, EntityEmbeddingStore]:
    path = Path(path)
    with open(path, "rb") as fh:
        if fh.read(4) != _MAGIC:
            raise FormatError(f"{path}: not an entity embedding file (bad magic)")
        count, dim = struct.unpack("<QQ", fh.read(16))
        (mlen,) = struct.unpack("<I", fh.read(4))
        method = fh.read(mlen).decode("utf-8")
        if method not in KG_METHODS:
            raise FormatError(f"{path}: unknown embedding method {method!r}")
        aliases = []
        for _ in range(count):
            (alen,) = struct.unpack("<I", fh.read(4))
            aliases.append(fh.read(alen).decode("utf-8"))
        payload = fh.read(4 * count * dim)
        if len(payload) != 4 * count * dim:
            raise FormatError(f"{path}: truncated embedding payload")
        matrix = np.frombuffer(payload, dtype="<f4").reshape(count, dim).copy()
    return _build(aliases, matrix, method, str(path))


def load_entity_file(path: str | Path) -> tuple[AliasDictionary, EntityEmbeddingStore]:
    """Dispatch on content: binary magic first, text header otherwise."""
    path = Path(path)
    with open(path, "rb") as fh:
        head = fh.read(4)
    if head == _MAGIC:
        return load_entity_binary(path)
    return load_entity_text(path)


def save_entity_text(path: str | Path, aliases: list[str], matrix: np.ndarray,
                     method: str) -> None:
    matrix = np.asarray(matrix, dtype=np.float32)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"#method={method} dim={matrix.shape[1]} count={matrix.shape[0]}\n")
        for alias, row in zip(aliases, matrix):
            fh.write(alias + "\t" + " ".join(repr(float(v)) for v in row) + "\n")


def save_entity_binary(path: str | Path, aliases: list[str], matrix: np.ndarray,
                       method: str) -> None:
    matrix = np.ascontiguousarray(matrix, dtype="<f4")
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<QQ", matrix.shape[0], matrix.shape[1]))
        raw = method.encode("utf-8")
        fh.write(struct.pack("<I", len(raw)))
        fh.write(raw)
        for alias in aliases:
            araw = alias.encode("utf-8")
            fh.write(struct.pack("<I", len(araw)))
            fh.write(araw)
        fh.write(matrix.tobytes())
