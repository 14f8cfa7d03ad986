"""Non-contextual text representations: stylometric vector and LSA embedding."""

from .preprocess import load_stopwords, preprocess
from .stylometric import STYLO_FEATURE_NAMES, StyloVector, stylometric, stylometric_matrix
from .lsa import LsaConfig, LsaModel, fit_lsa, load_lsa_model, save_lsa_model, transform_lsa
from .svd import randomized_svd

__all__ = [
    "preprocess",
    "load_stopwords",
    "StyloVector",
    "stylometric",
    "stylometric_matrix",
    "STYLO_FEATURE_NAMES",
    "LsaConfig",
    "LsaModel",
    "fit_lsa",
    "transform_lsa",
    "save_lsa_model",
    "load_lsa_model",
    "randomized_svd",
]
