"""Metric definitions, grid search bookkeeping and model persistence."""

import numpy as np
import pytest

from heterorep.errors import EvaluationError, TrainingError
from heterorep.learners import (
    LOGREG_LAMBDA_GRID,
    SGD_GRID,
    compute_metrics,
    evaluate,
    grid_search,
    load_model,
    save_model,
    train_logreg,
    trial_table_rows,
)
from heterorep.learners.grid import _grid_points, select_best


class TestComputeMetrics:
    def test_perfect_predictions(self):
        y = np.array([0, 1, 0, 1, 1])
        for avg in ("binary", "macro", "weighted"):
            m = compute_metrics(y, y, 2, averaging=avg)
            assert (m.accuracy, m.f1, m.precision, m.recall) == (1.0, 1.0, 1.0, 1.0)
            assert not m.degenerate

    def test_hand_confusion(self):
        # TP=2 FP=1 FN=1 TN=6 on the positive class
        y_true = np.array([1, 1, 1, 0, 0, 0, 0, 0, 0, 0])
        y_pred = np.array([1, 1, 0, 1, 0, 0, 0, 0, 0, 0])
        m = compute_metrics(y_true, y_pred, 2, averaging="binary", positive_class=1)
        assert m.precision == pytest.approx(2 / 3)
        assert m.recall == pytest.approx(2 / 3)
        assert m.f1 == pytest.approx(2 / 3)
        assert m.accuracy == pytest.approx(0.8)

    def test_majority_class_predictor(self):
        y_true = np.array([0] * 52 + [1] * 48)
        y_pred = np.zeros(100, dtype=int)
        m = compute_metrics(y_true, y_pred, 2, averaging="weighted")
        assert m.accuracy == pytest.approx(0.52)
        assert m.f1 < m.accuracy
        assert m.degenerate  # class 1 has no predicted positives
        # hand check: F1(class0) = 2*.52/1.52, class1 = 0, weighted by support
        assert m.f1 == pytest.approx(0.52 * (2 * 0.52 / 1.52))

    def test_macro_vs_weighted_on_imbalance(self):
        y_true = np.array([0, 0, 0, 1])
        y_pred = np.array([0, 0, 0, 0])
        macro = compute_metrics(y_true, y_pred, 2, averaging="macro")
        weighted = compute_metrics(y_true, y_pred, 2, averaging="weighted")
        assert macro.recall == pytest.approx(0.5)       # (1 + 0) / 2
        assert weighted.recall == pytest.approx(0.75)   # 3/4 * 1 + 1/4 * 0

    def test_unseen_label_rejected(self):
        with pytest.raises(EvaluationError):
            compute_metrics(np.array([0, 2]), np.array([0, 1]), 2)

    def test_empty_rejected(self):
        with pytest.raises(EvaluationError):
            compute_metrics(np.array([], dtype=int), np.array([], dtype=int), 2)

    def test_bad_averaging(self):
        with pytest.raises(EvaluationError):
            compute_metrics(np.array([0]), np.array([0]), 1, averaging="micro")


def blob_data(seed=0):
    rng = np.random.Generator(np.random.PCG64(seed))
    X = np.vstack([rng.standard_normal((25, 3)) + 2, rng.standard_normal((25, 3)) - 2])
    y = np.array([1] * 25 + [0] * 25)
    return X, y


class TestGridSearch:
    def test_logreg_grid_has_three_trials(self):
        X, y = blob_data()
        best, trials = grid_search(
            "logreg", {"l2_lambda": list(LOGREG_LAMBDA_GRID)}, X, y, X, y, 2, seed=1)
        assert len(trials) == 3
        assert best.family == "logreg"

    def test_default_sgd_grid_is_144_points(self):
        points = _grid_points({k: list(v) for k, v in SGD_GRID.items()})
        assert len(points) == 144  # 2 losses x 4 alphas x 6 l1_ratios x 3 power_ts

    def test_trial_count_is_cartesian_product(self):
        X, y = blob_data(1)
        grid = {"loss": ["log", "hinge"], "alpha": [0.01, 0.001], "max_epochs": [3]}
        _, trials = grid_search("sgd", grid, X, y, X, y, 2, seed=2)
        assert len(trials) == 4 * 1  # 2 x 2 x 1

    def test_tie_breaks_prefer_smaller_then_earlier(self):
        from heterorep.learners.grid import GridTrial
        from heterorep.learners.metrics import MetricsRecord

        def trial(i, f1, n_params):
            m = MetricsRecord(accuracy=f1, f1=f1, precision=f1, recall=f1,
                              averaging="weighted")
            return GridTrial(trial_id=i, family="x", params={}, metrics=m,
                             epochs=1, n_parameters=n_params, model=None)

        big_early = trial(0, 0.9, 100)
        small_late = trial(1, 0.9, 10)
        assert select_best([big_early, small_late]) is small_late
        twin = trial(2, 0.9, 10)
        assert select_best([big_early, small_late, twin]) is small_late

    def test_failed_trials_kept_and_all_failed_raises(self):
        X = np.ones((6, 2))
        y = np.zeros(6, dtype=int)  # single class: every trial fails
        with pytest.raises(TrainingError, match="failed"):
            grid_search("logreg", {"l2_lambda": [0.1, 0.01]}, X, y, X, y, 2)

    def test_trial_table_shape(self):
        X, y = blob_data(2)
        _, trials = grid_search("logreg", {"l2_lambda": [0.1, 0.01]}, X, y, X, y, 2)
        rows = trial_table_rows(trials)
        assert rows[0][:3] == ["trial", "family", "params"]
        assert len(rows) == 3
        assert rows[1][8] == "ok"

    def test_empty_grid_rejected(self):
        X, y = blob_data(3)
        with pytest.raises(TrainingError):
            grid_search("logreg", {"l2_lambda": []}, X, y, X, y, 2)


class TestPersistence:
    def test_roundtrip_all_fields(self, tmp_path):
        X, y = blob_data(4)
        model = train_logreg(X, y, l2_lambda=0.01)
        model.labels = ("real", "fake")
        path = tmp_path / "model.mdl"
        save_model(model, path)
        loaded = load_model(path)
        assert loaded.family == "logreg"
        assert loaded.labels == ("real", "fake")
        assert loaded.n_classes == 2
        assert loaded.params == model.params
        for k in model.weights:
            np.testing.assert_array_equal(loaded.weights[k], model.weights[k])
        np.testing.assert_array_equal(loaded.predict(X), model.predict(X))

    def test_evaluate_with_loaded_model(self, tmp_path):
        X, y = blob_data(5)
        model = train_logreg(X, y, l2_lambda=0.001)
        path = tmp_path / "m.mdl"
        save_model(model, path)
        m = evaluate(load_model(path), X, y, averaging="weighted")
        assert m.accuracy == 1.0

    def test_bad_magic(self, tmp_path):
        from heterorep.errors import FormatError
        path = tmp_path / "junk.mdl"
        path.write_bytes(b"JUNKJUNKJUNK")
        with pytest.raises(FormatError):
            load_model(path)
