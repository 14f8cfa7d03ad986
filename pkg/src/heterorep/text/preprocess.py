"""Text cleaning shared by the LSA pipeline and the embedding exporter.

Pipeline: lowercase, whitespace-tokenize, drop hashtag tokens, delete
punctuation characters in place, drop stopwords and empty leftovers.
Punctuation is anything in Unicode category P.
"""

from __future__ import annotations

import unicodedata
from functools import lru_cache
from importlib import resources


@lru_cache(maxsize=1)
def load_stopwords() -> frozenset[str]:
    """The bundled English stopword list."""
    text = resources.files("heterorep.data").joinpath("stopwords_en.txt").read_text("utf-8")
    words = set()
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line)
    return frozenset(words)


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def strip_punct(token: str) -> str:
    return "".join(ch for ch in token if not _is_punct(ch))


def preprocess(text: str) -> list[str]:
    """Tokenize and clean one document. Empty input gives an empty list."""
    stop = load_stopwords()
    out: list[str] = []
    for tok in text.lower().split():
        if tok.startswith("#"):
            continue
        tok = strip_punct(tok)
        if tok and tok not in stop:
            out.append(tok)
    return out
