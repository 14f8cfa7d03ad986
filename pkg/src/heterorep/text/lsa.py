"""TF-IDF n-gram extraction reduced by truncated SVD.

The vocabulary keeps the most document-frequent word n-grams (sizes 1-2 over
preprocessed tokens) and character n-grams (sizes 1-3 over the space-joined
token string), ties broken lexicographically.  Weighting is smooth idf,
ln((1+N)/(1+df)) + 1, with L2 normalization of the combined row.  The fitted
model projects any token list into the reduced space; out-of-vocabulary
n-grams are ignored.
"""

from __future__ import annotations

import struct
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from ..errors import FormatError, ParameterError
from .svd import randomized_svd

_MAGIC = b"LSA1"

WORD = 0
CHAR = 1


@dataclass(frozen=True)
class LsaConfig:
    word_ngram_range: tuple[int, int] = (1, 2)
    char_ngram_range: tuple[int, int] = (1, 3)
    n_word_features: int = 2500
    n_char_features: int = 2500
    svd_dim: int = 512
    seed: int = 0

    def __post_init__(self):
        if min(self.n_word_features, self.n_char_features, self.svd_dim) <= 0:
            raise ParameterError("LSA feature counts and svd_dim must be positive")
        if self.svd_dim > self.n_word_features + self.n_char_features:
            raise ParameterError("svd_dim exceeds the maximum vocabulary size")


@dataclass
class LsaModel:
    config: LsaConfig
    vocabulary: list[tuple[int, str]]      # (WORD|CHAR, gram) in selection order
    idf: np.ndarray                        # float64, len(vocabulary)
    projection: np.ndarray                 # float64, len(vocabulary) x dim
    singular_values: np.ndarray            # float64, dim
    gram_index: dict[tuple[int, str], int] = field(repr=False, default_factory=dict)

    def __post_init__(self):
        if not self.gram_index:
            self.gram_index = {entry: i for i, entry in enumerate(self.vocabulary)}

    @property
    def dim(self) -> int:
        return self.projection.shape[1]


def word_grams(tokens: list[str], lo: int, hi: int):
    for n in range(lo, hi + 1):
        for i in range(len(tokens) - n + 1):
            yield " ".join(tokens[i:i + n])


def char_grams(text: str, lo: int, hi: int):
    for n in range(lo, hi + 1):
        for i in range(len(text) - n + 1):
            yield text[i:i + n]


def _doc_grams(tokens: list[str], cfg: LsaConfig):
    for g in word_grams(tokens, *cfg.word_ngram_range):
        yield (WORD, g)
    joined = " ".join(tokens)
    for g in char_grams(joined, *cfg.char_ngram_range):
        yield (CHAR, g)


def _select(df: dict[str, int], limit: int) -> list[str]:
    return sorted(df, key=lambda g: (-df[g], g))[:limit]


def fit_lsa(corpus: list[list[str]], cfg: LsaConfig) -> LsaModel:
    """Fit vocabulary, idf and the SVD projection on the training documents."""
    if not corpus or all(len(doc) == 0 for doc in corpus):
        raise ParameterError("LSA needs at least one non-empty document")

    n_docs = len(corpus)
    word_df: dict[str, int] = {}
    char_df: dict[str, int] = {}
    for tokens in corpus:
        for g in set(word_grams(tokens, *cfg.word_ngram_range)):
            word_df[g] = word_df.get(g, 0) + 1
        joined = " ".join(tokens)
        for g in set(char_grams(joined, *cfg.char_ngram_range)):
            char_df[g] = char_df.get(g, 0) + 1

    vocabulary = [(WORD, g) for g in _select(word_df, cfg.n_word_features)]
    vocabulary += [(CHAR, g) for g in _select(char_df, cfg.n_char_features)]
    gram_index = {entry: i for i, entry in enumerate(vocabulary)}

    df = np.array(
        [word_df[g] if kind == WORD else char_df[g] for kind, g in vocabulary],
        dtype=np.float64,
    )
    idf = np.log((1.0 + n_docs) / (1.0 + df)) + 1.0

    model = LsaModel(
        config=cfg,
        vocabulary=vocabulary,
        idf=idf,
        projection=np.zeros((len(vocabulary), 0)),
        singular_values=np.zeros(0),
        gram_index=gram_index,
    )
    tfidf = _tfidf_matrix(model, corpus)

    k = min(cfg.svd_dim, n_docs, len(vocabulary))
    _, s, vt = randomized_svd(tfidf, k, seed=cfg.seed, n_iter=10)
    tol = max(tfidf.shape) * np.finfo(np.float64).eps * (s[0] if s.size else 0.0)
    rank = int(np.sum(s > tol))
    if rank < cfg.svd_dim:
        warnings.warn(
            f"train TF-IDF matrix rank {rank} < requested dimension "
            f"{cfg.svd_dim}; reducing to {rank}",
            stacklevel=2,
        )
        s, vt = s[:rank], vt[:rank]

    model.projection = np.ascontiguousarray(vt.T)
    model.singular_values = s
    return model


def _tfidf_row(model: LsaModel, tokens: list[str]) -> tuple[list[int], list[float]]:
    counts: dict[int, int] = {}
    for entry in _doc_grams(tokens, model.config):
        col = model.gram_index.get(entry)
        if col is not None:
            counts[col] = counts.get(col, 0) + 1
    if not counts:
        return [], []
    cols = sorted(counts)
    vals = [counts[c] * model.idf[c] for c in cols]
    norm = np.sqrt(np.dot(vals, vals))
    if norm > 0:
        vals = [v / norm for v in vals]
    return cols, vals


def _tfidf_matrix(model: LsaModel, corpus: list[list[str]]) -> sp.csr_matrix:
    data: list[float] = []
    indices: list[int] = []
    indptr = [0]
    for tokens in corpus:
        cols, vals = _tfidf_row(model, tokens)
        indices.extend(cols)
        data.extend(vals)
        indptr.append(len(indices))
    return sp.csr_matrix(
        (np.array(data), np.array(indices, dtype=np.int64), np.array(indptr, dtype=np.int64)),
        shape=(len(corpus), len(model.vocabulary)),
    )


def transform_lsa(model: LsaModel, tokens: list[str]) -> np.ndarray:
    """Project one preprocessed document; all-OOV input maps to the zero vector."""
    cols, vals = _tfidf_row(model, tokens)
    out = np.zeros(model.dim, dtype=np.float64)
    for c, v in zip(cols, vals):
        out += v * model.projection[c]
    return out


def transform_lsa_matrix(model: LsaModel, corpus: list[list[str]]) -> np.ndarray:
    """Project a document sequence into an N x dim embedding matrix."""
    return _tfidf_matrix(model, corpus) @ model.projection


def save_lsa_model(model: LsaModel, path: str | Path) -> None:
    """Serialize to the versioned binary layout (little-endian, float64 payload)."""
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        w_lo, w_hi = model.config.word_ngram_range
        c_lo, c_hi = model.config.char_ngram_range
        fh.write(struct.pack("<6Q", w_lo, w_hi, c_lo, c_hi,
                             len(model.vocabulary), model.dim))
        for kind, gram in model.vocabulary:
            raw = gram.encode("utf-8")
            fh.write(struct.pack("<BI", kind, len(raw)))
            fh.write(raw)
        fh.write(np.ascontiguousarray(model.idf, dtype="<f8").tobytes())
        fh.write(np.ascontiguousarray(model.singular_values, dtype="<f8").tobytes())
        fh.write(np.ascontiguousarray(model.projection, dtype="<f8").tobytes())


def load_lsa_model(path: str | Path) -> LsaModel:
    with open(path, "rb") as fh:
        if fh.read(4) != _MAGIC:
            raise FormatError(f"{path}: not an LSA model file (bad magic)")
        w_lo, w_hi, c_lo, c_hi, n_vocab, dim = struct.unpack("<6Q", fh.read(48))
        vocabulary: list[tuple[int, str]] = []
        for _ in range(n_vocab):
            kind, length = struct.unpack("<BI", fh.read(5))
            vocabulary.append((kind, fh.read(length).decode("utf-8")))
        idf = np.frombuffer(fh.read(8 * n_vocab), dtype="<f8").copy()
        singular = np.frombuffer(fh.read(8 * dim), dtype="<f8").copy()
        proj = np.frombuffer(fh.read(8 * n_vocab * dim), dtype="<f8").copy()
        if proj.size != n_vocab * dim:
            raise FormatError(f"{path}: truncated projection payload")
    n_word = sum(1 for kind, _ in vocabulary if kind == WORD)
    n_char = n_vocab - n_word
    cfg = LsaConfig(
        word_ngram_range=(int(w_lo), int(w_hi)),
        char_ngram_range=(int(c_lo), int(c_hi)),
        n_word_features=max(int(n_word), 1),
        n_char_features=max(int(n_char), 1),
        svd_dim=max(int(dim), 1),
        seed=0,
    )
    return LsaModel(
        config=cfg,
        vocabulary=vocabulary,
        idf=idf,
        projection=proj.reshape(n_vocab, dim),
        singular_values=singular,
    )
