"""Shared fixtures: tiny corpora, entity files and block registries."""

from __future__ import annotations

import numpy as np
import pytest

from heterorep.corpus import ColumnSchema, DatasetSplit, Document
from heterorep.kg.aliases import save_entity_binary, save_entity_text


@pytest.fixture
def schema():
    return ColumnSchema(id="id", text="text", label="label", metadata=("speaker",))


def make_split(labels, name="train", text="some text"):
    docs = tuple(
        Document(id=f"{name}-{i}", text=text, label=lab) for i, lab in enumerate(labels)
    )
    return DatasetSplit(name=name, documents=docs)


@pytest.fixture
def entity_fixture(tmp_path):
    """Five entities, dim 4, written in both on-disk layouts."""
    aliases = ["Donald Trump", "vaccine", "Trump", "government", "New York City"]
    rng = np.random.Generator(np.random.PCG64(7))
    matrix = rng.standard_normal((5, 4)).astype(np.float32)
    text_path = tmp_path / "ents.txt"
    bin_path = tmp_path / "ents.ent"
    save_entity_text(text_path, aliases, matrix, "TransE")
    save_entity_binary(bin_path, aliases, matrix, "TransE")
    return {"aliases": aliases, "matrix": matrix, "text": text_path, "binary": bin_path}
