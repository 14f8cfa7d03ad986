"""Concept-matching text normalization.

Same normalization is applied to document text, metadata values and the
alias side of the entity dictionary, which is what makes exact string
alignment meaningful.  Punctuation characters are deleted in place (so
"COVID-19" becomes "covid19", it is not split); lemmatization is a static
surface-to-lemma lookup with identity fallback.
"""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

from ..text.preprocess import load_stopwords, strip_punct


@lru_cache(maxsize=1)
def load_lemmas() -> dict:
    text = resources.files("heterorep.data").joinpath("lemmas_en.tsv").read_text("utf-8")
    table: dict[str, str] = {}
    for line in text.splitlines():
        if not line or line.startswith("#"):
            continue
        surface, _, lemma = line.partition("\t")
        if surface and lemma:
            table[surface] = lemma
    return table


def preprocess_kg(text: str) -> list[str]:
    """Lowercase, strip punctuation in place, drop stopwords, lemmatize."""
    stop = load_stopwords()
    lemmas = load_lemmas()
    out: list[str] = []
    for tok in text.lower().split():
        tok = strip_punct(tok)
        if not tok or tok in stop:
            continue
        out.append(lemmas.get(tok, tok))
    return out
