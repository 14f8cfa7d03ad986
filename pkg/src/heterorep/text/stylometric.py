"""Surface-statistics document vector (word-length moments, character counts).

Everything is computed on the raw text: style lives in exactly the casing,
punctuation and stopwords that preprocessing would strip.  Words are
whitespace-split tokens; letters/punctuation are Unicode categories L/P;
digits are category Nd; a hashtag is a token starting with '#' followed by
at least one more character (its characters still feed the other counters).
"""

from __future__ import annotations

import math
import unicodedata
from dataclasses import dataclass

import numpy as np

STYLO_FEATURE_NAMES = (
    "max_word_len",
    "min_word_len",
    "mean_word_len",
    "std_word_len",
    "n_upper_start",
    "n_lower_start",
    "n_digits",
    "n_letters",
    "n_spaces",
    "n_punct",
    "n_hashtags",
    "n_vowel_a",
    "n_vowel_e",
    "n_vowel_i",
    "n_vowel_o",
    "n_vowel_u",
)

# The 10 character-level counters, for the reduced profile.
CHAR10_FEATURE_NAMES = STYLO_FEATURE_NAMES[6:]


@dataclass(frozen=True)
class StyloVector:
    max_word_len: float
    min_word_len: float
    mean_word_len: float
    std_word_len: float
    n_upper_start: int
    n_lower_start: int
    n_digits: int
    n_letters: int
    n_spaces: int
    n_punct: int
    n_hashtags: int
    n_vowel_a: int
    n_vowel_e: int
    n_vowel_i: int
    n_vowel_o: int
    n_vowel_u: int

    def as_array(self, profile: str = "full16") -> np.ndarray:
        names = STYLO_FEATURE_NAMES if profile == "full16" else CHAR10_FEATURE_NAMES
        return np.array([getattr(self, n) for n in names], dtype=np.float64)


def stylometric(text: str) -> StyloVector:
    """Stylometric counts of one raw (unpreprocessed) text."""
    words = text.split()
    lengths = [len(w) for w in words]
    if lengths:
        mean = sum(lengths) / len(lengths)
        var = sum((l - mean) ** 2 for l in lengths) / len(lengths)
        wmax, wmin, wstd = float(max(lengths)), float(min(lengths)), math.sqrt(var)
    else:
        mean = wmax = wmin = wstd = 0.0

    upper_start = sum(1 for w in words if w[:1].isupper())
    lower_start = sum(1 for w in words if w[:1].islower())
    hashtags = sum(1 for w in words if w.startswith("#") and len(w) > 1)

    digits = letters = spaces = punct = 0
    vowels = {"a": 0, "e": 0, "i": 0, "o": 0, "u": 0}
    for ch in text:
        cat = unicodedata.category(ch)
        if cat == "Nd":
            digits += 1
        elif cat.startswith("L"):
            letters += 1
            low = ch.lower()
            if low in vowels:
                vowels[low] += 1
        elif cat.startswith("P"):
            punct += 1
        if ch.isspace():
            spaces += 1

    return StyloVector(
        max_word_len=wmax,
        min_word_len=wmin,
        mean_word_len=mean,
        std_word_len=wstd,
        n_upper_start=upper_start,
        n_lower_start=lower_start,
        n_digits=digits,
        n_letters=letters,
        n_spaces=spaces,
        n_punct=punct,
        n_hashtags=hashtags,
        n_vowel_a=vowels["a"],
        n_vowel_e=vowels["e"],
        n_vowel_i=vowels["i"],
        n_vowel_o=vowels["o"],
        n_vowel_u=vowels["u"],
    )


def stylometric_matrix(texts: list[str], profile: str = "full16") -> np.ndarray:
    """Stack stylometric vectors for a document sequence (float32 block)."""
    if profile not in ("full16", "char10"):
        raise ValueError(f"unknown stylometric profile {profile!r}")
    dim = 16 if profile == "full16" else 10
    out = np.zeros((len(texts), dim), dtype=np.float32)
    for i, text in enumerate(texts):
        out[i] = stylometric(text).as_array(profile)
    return out
