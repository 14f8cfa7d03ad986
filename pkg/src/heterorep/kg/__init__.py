"""Knowledge-graph document representations: alias matching and aggregation."""

from .preprocess import load_lemmas, preprocess_kg
from .aliases import (
    AliasDictionary,
    EntityEmbeddingStore,
    KG_METHODS,
    load_entity_binary,
    load_entity_file,
    load_entity_text,
    save_entity_binary,
    save_entity_text,
)
from .concepts import (
    ConceptSet,
    ConceptStats,
    agg_average,
    concept_stats,
    entity_concepts,
    entity_repr,
    match_concepts,
)

__all__ = [
    "preprocess_kg",
    "load_lemmas",
    "AliasDictionary",
    "EntityEmbeddingStore",
    "KG_METHODS",
    "load_entity_text",
    "load_entity_binary",
    "load_entity_file",
    "save_entity_text",
    "save_entity_binary",
    "ConceptSet",
    "ConceptStats",
    "match_concepts",
    "agg_average",
    "entity_concepts",
    "entity_repr",
    "concept_stats",
]
