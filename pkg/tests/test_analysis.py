"""Feature ranking, exhaustive subset ablation and variance-word extraction."""

import math
import time

import numpy as np
import pytest

from heterorep.analysis import (
    ablate,
    class_variance_words,
    enumerate_subsets,
    mutual_information,
    rank_and_attribute,
)
from heterorep.analysis.ablation import best_worst, subset_blocks
from heterorep.analysis.mi import bin_column, discrete_mi
from heterorep.errors import ParameterError
from heterorep.stacking import BlockRegistry


class TestMutualInformation:
    def test_label_copy_gives_label_entropy(self):
        labels = np.array([0, 1] * 500)
        column = labels.astype(float)
        assert mutual_information(column, labels, bins=16) == pytest.approx(
            math.log(2), abs=1e-9)

    def test_independent_column_near_zero(self):
        rng = np.random.Generator(np.random.PCG64(100))
        labels = np.array([0, 1] * 5000)
        column = rng.standard_normal(10000)
        assert mutual_information(column, labels, bins=16) < 0.005

    def test_constant_column_is_zero(self):
        labels = np.array([0, 1, 0, 1])
        assert mutual_information(np.ones(4), labels) == 0.0

    def test_symmetry(self):
        rng = np.random.Generator(np.random.PCG64(5))
        column = rng.standard_normal(400)
        labels = rng.integers(0, 3, size=400)
        binned = bin_column(column, 8)
        assert abs(discrete_mi(binned, labels) - discrete_mi(labels, binned)) < 1e-12

    def test_self_information_is_bin_entropy(self):
        rng = np.random.Generator(np.random.PCG64(6))
        column = rng.standard_normal(300)
        binned = bin_column(column, 8)
        _, counts = np.unique(binned, return_counts=True)
        p = counts / counts.sum()
        entropy = -np.sum(p * np.log(p))
        assert discrete_mi(binned, binned) == pytest.approx(entropy, abs=1e-12)

    def test_scores_non_negative(self):
        rng = np.random.Generator(np.random.PCG64(7))
        labels = rng.integers(0, 2, size=200)
        for _ in range(10):
            col = rng.standard_normal(200)
            assert mutual_information(col, labels) >= 0.0

    def test_bad_bins(self):
        with pytest.raises(ParameterError):
            mutual_information(np.ones(4), np.array([0, 1, 0, 1]), bins=1)


def labelled_matrix(seed=0, n=400):
    """Block A's two columns copy the label; block B is pure noise."""
    rng = np.random.Generator(np.random.PCG64(seed))
    labels = rng.integers(0, 2, size=n)
    a = np.column_stack([labels, labels]).astype(float)
    b = rng.standard_normal((n, 6))
    return np.hstack([a, b]), [("A", 0, 2), ("B", 2, 8)], labels


class TestRankAndAttribute:
    def test_informative_block_takes_top_slots(self):
        matrix, attribution, labels = labelled_matrix()
        _, counts = rank_and_attribute(matrix, attribution, labels, k=2)
        assert counts == {"A": 2, "B": 0}

    def test_k_equal_to_total_counts_dimensions(self):
        matrix, attribution, labels = labelled_matrix(1)
        _, counts = rank_and_attribute(matrix, attribution, labels, k=8)
        assert counts == {"A": 2, "B": 6}

    def test_k_zero_gives_zero_counts(self):
        matrix, attribution, labels = labelled_matrix(2)
        _, counts = rank_and_attribute(matrix, attribution, labels, k=0)
        assert sum(counts.values()) == 0

    def test_k_clamped_with_warning(self):
        matrix, attribution, labels = labelled_matrix(3)
        with pytest.warns(UserWarning, match="clamp"):
            _, counts = rank_and_attribute(matrix, attribution, labels, k=99)
        assert sum(counts.values()) == 8

    def test_ties_break_by_column_index(self):
        labels = np.array([0, 1] * 50)
        col = labels.astype(float)
        matrix = np.column_stack([col, col, col])
        ranking, _ = rank_and_attribute(matrix, [("X", 0, 3)], labels, k=3)
        assert ranking.order.tolist() == [0, 1, 2]

    def test_bad_attribution_rejected(self):
        matrix, _, labels = labelled_matrix(4)
        with pytest.raises(ParameterError):
            rank_and_attribute(matrix, [("A", 0, 2), ("B", 3, 8)], labels, k=2)


def synthetic_registries(nblocks=3, n_docs=500, seed=0, informative=0):
    """One block is a noisy label copy, the rest pure noise."""
    rng = np.random.Generator(np.random.PCG64(seed))
    labels = rng.integers(0, 2, size=n_docs)
    ids = [f"d{i}" for i in range(n_docs)]
    n_val = n_docs // 4
    train_reg = BlockRegistry(ids[n_val:])
    val_reg = BlockRegistry(ids[:n_val])
    for b in range(nblocks):
        if b == informative:
            col = labels + 0.1 * rng.standard_normal(n_docs)
            block = np.column_stack([col, col * 2.0]).astype(np.float32)
        else:
            block = rng.standard_normal((n_docs, 2)).astype(np.float32)
        train_reg.register(f"b{b}", "text", block[n_val:])
        val_reg.register(f"b{b}", "text", block[:n_val])
    return train_reg, val_reg, labels[n_val:], labels[:n_val]


class TestAblate:
    def test_three_blocks_give_seven_records(self):
        train_reg, val_reg, y_tr, y_val = synthetic_registries()
        records = ablate(train_reg, val_reg, y_tr, y_val, 2, seed=4)
        assert len(records) == 7
        assert sorted(r.bitmask for r in records) == list(range(1, 8))

    def test_enumeration_is_fast_and_complete(self):
        start = time.perf_counter()
        masks = enumerate_subsets(11)
        elapsed = time.perf_counter() - start
        assert len(masks) == 2047
        assert len(set(masks)) == 2047
        assert elapsed < 1.0

    def test_informative_block_dominates_ranking(self):
        train_reg, val_reg, y_tr, y_val = synthetic_registries(seed=9, informative=1)
        records = ablate(train_reg, val_reg, y_tr, y_val, 2, seed=4)
        with_b = [r for r in records if "b1" in r.blocks]
        without_b = [r for r in records if "b1" not in r.blocks]
        assert min(r.metrics.f1 for r in with_b) > max(r.metrics.f1 for r in without_b)
        best, worst = best_worst(records, k=10)
        assert all("b1" in r.blocks for r in best[:4])

    def test_dimensions_match_subsets(self):
        train_reg, val_reg, y_tr, y_val = synthetic_registries(seed=2)
        records = ablate(train_reg, val_reg, y_tr, y_val, 2, seed=1)
        names = train_reg.names()
        for r in records:
            assert r.blocks == subset_blocks(r.bitmask, names)
            assert r.dimension == 2 * len(r.blocks)
        full = max(records, key=lambda r: r.dimension)
        assert full.bitmask == 7 and full.dimension == 6

    def test_small_dataset_skips_sampling(self):
        # with 375 train docs below the default threshold, all rows are used;
        # this is observable through determinism wrt the sampling seed
        train_reg, val_reg, y_tr, y_val = synthetic_registries(seed=3)
        r1 = ablate(train_reg, val_reg, y_tr, y_val, 2, seed=1)
        r2 = ablate(train_reg, val_reg, y_tr, y_val, 2, seed=2)
        f1_1 = [r.metrics.f1 for r in r1]
        f1_2 = [r.metrics.f1 for r in r2]
        assert f1_1 == f1_2

    def test_sampling_engages_above_threshold(self):
        train_reg, val_reg, y_tr, y_val = synthetic_registries(n_docs=800, seed=5)
        records = ablate(train_reg, val_reg, y_tr, y_val, 2, seed=1,
                         sample_fraction=0.1, min_sample_size=100)
        assert len(records) == 7
        assert all(r.metrics is not None for r in records)

    def test_no_blocks_rejected(self):
        with pytest.raises(ParameterError):
            enumerate_subsets(0)

    def test_thread_cap_env_var(self, monkeypatch):
        from heterorep.analysis.ablation import worker_count
        monkeypatch.setenv("HETEROREP_THREADS", "2")
        assert worker_count() == 2
        monkeypatch.setenv("HETEROREP_THREADS", "0")
        assert worker_count() == 1

    def test_failed_subsets_flagged_and_sorted_last(self):
        # validation labels outside the declared class set break scoring;
        # the sweep must keep going and flag every record instead of dying
        train_reg, val_reg, y_tr, y_val = synthetic_registries(seed=7)
        bad_val = y_val.copy()
        bad_val[0] = 5
        records = ablate(train_reg, val_reg, y_tr, bad_val, 2, seed=1)
        assert len(records) == 7
        assert all(r.failed and r.metrics is None for r in records)
        assert all(r.error for r in records)


class TestClassVarianceWords:
    def test_alternating_word_tops_its_class(self):
        # word w1 alternates 0 / high inside class "fake" only
        vocab = ["w0", "w1", "w2"]
        tfidf = np.array([
            [0.5, 0.0, 0.1],   # fake
            [0.5, 0.9, 0.1],   # fake
            [0.5, 0.0, 0.1],   # fake
            [0.5, 0.9, 0.1],   # fake
            [0.2, 0.0, 0.3],   # real
            [0.2, 0.0, 0.3],   # real
        ])
        labels = np.array([0, 0, 0, 0, 1, 1])
        out = class_variance_words(tfidf, vocab, labels, ["fake", "real"], top_k=1)
        assert out["fake"][0][0] == "w1"
        assert out["real"][0][1] == 0.0  # everything constant within "real"

    def test_constant_word_never_ranks(self):
        vocab = ["const", "varies"]
        tfidf = np.array([[0.4, 0.1], [0.4, 0.9], [0.4, 0.5]])
        labels = np.zeros(3, dtype=int)
        out = class_variance_words(tfidf, vocab, labels, ["only"], top_k=1)
        assert out["only"][0][0] == "varies"

    def test_variance_matches_two_pass_oracle(self):
        rng = np.random.Generator(np.random.PCG64(11))
        tfidf = rng.random((40, 5))
        labels = np.array([0] * 25 + [1] * 15)
        out = class_variance_words(tfidf, [f"w{i}" for i in range(5)], labels,
                                   ["a", "b"], top_k=5)
        for class_id, name in enumerate(["a", "b"]):
            rows = tfidf[labels == class_id]
            for word, got in out[name]:
                j = int(word[1:])
                mean = math.fsum(rows[:, j]) / len(rows)
                oracle = math.fsum((v - mean) ** 2 for v in rows[:, j]) / len(rows)
                assert abs(got - oracle) <= 1e-10 * max(oracle, 1e-300)

    def test_single_doc_class_flagged_zero(self):
        tfidf = np.array([[0.1, 0.2], [0.5, 0.9], [0.4, 0.8]])
        labels = np.array([0, 1, 1])
        out = class_variance_words(tfidf, ["x", "y"], labels, ["solo", "pair"], top_k=2)
        assert all(v == 0.0 for _, v in out["solo"])

    def test_empty_class_rejected(self):
        with pytest.raises(ParameterError):
            class_variance_words(np.ones((2, 1)), ["w"], np.zeros(2, dtype=int),
                                 ["a", "ghost"], top_k=1)

    def test_empty_vocabulary_rejected(self):
        with pytest.raises(ParameterError):
            class_variance_words(np.ones((2, 0)), [], np.zeros(2, dtype=int), ["a"], 1)

    def test_ties_break_lexicographically(self):
        tfidf = np.array([[0.0, 0.0], [1.0, 1.0]])
        labels = np.zeros(2, dtype=int)
        out = class_variance_words(tfidf, ["zeta", "alpha"], labels, ["c"], top_k=2)
        assert [w for w, _ in out["c"]] == ["alpha", "zeta"]
