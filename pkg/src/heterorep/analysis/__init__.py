"""Post-hoc analyses: feature ranking, subset ablation, class-variance words."""

from .mi import FeatureRanking, mutual_information, rank_and_attribute
from .ablation import AblationRecord, ablate, enumerate_subsets
from .words import class_variance_words, word_tfidf

__all__ = [
    "mutual_information",
    "rank_and_attribute",
    "FeatureRanking",
    "AblationRecord",
    "ablate",
    "enumerate_subsets",
    "class_variance_words",
    "word_tfidf",
]
