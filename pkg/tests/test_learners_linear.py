"""Logistic regression and elastic-net SGD behavior."""

import numpy as np
import pytest

from heterorep.errors import ParameterError, TrainingError
from heterorep.learners import LinearModelSpec, train_logreg, train_sgd
from heterorep.learners.linear import learning_rate


def separable_blobs(seed=0, n_per=20, gap=4.0):
    rng = np.random.Generator(np.random.PCG64(seed))
    a = rng.standard_normal((n_per, 2)) + [gap, gap]
    b = rng.standard_normal((n_per, 2)) - [gap, gap]
    X = np.vstack([a, b])
    y = np.array([1] * n_per + [0] * n_per)
    return X, y


class TestLogreg:
    def test_separable_blobs_fit_perfectly(self):
        X, y = separable_blobs()
        model = train_logreg(X, y, l2_lambda=0.001)
        assert np.array_equal(model.predict(X), y)

    def test_single_class_rejected(self):
        X = np.ones((5, 2))
        with pytest.raises(TrainingError, match="single class"):
            train_logreg(X, np.zeros(5, dtype=int), l2_lambda=0.1)

    def test_nonfinite_rejected(self):
        X = np.array([[1.0], [np.inf]])
        with pytest.raises(TrainingError, match="NaN/Inf"):
            train_logreg(X, np.array([0, 1]), l2_lambda=0.1)

    def test_huge_lambda_collapses_to_prior(self):
        rng = np.random.Generator(np.random.PCG64(8))
        X = rng.standard_normal((60, 4))
        y = np.array([0] * 20 + [1] * 40)  # class 1 is the prior class
        rng.shuffle(y)
        model = train_logreg(X, y, l2_lambda=1e6, max_epochs=3000)
        assert np.max(np.abs(model.weights["W"])) < 1e-3
        assert np.all(model.predict(X) == 1)

    def test_loss_history_monotone_non_increasing(self):
        X, y = separable_blobs(seed=3, gap=1.0)
        model = train_logreg(X, y, l2_lambda=0.01)
        history = np.array(model.val_history)
        assert np.all(np.diff(history) <= 0)

    def test_multinomial_three_classes(self):
        rng = np.random.Generator(np.random.PCG64(4))
        centers = np.array([[5, 0], [-5, 5], [0, -5]], dtype=float)
        X = np.vstack([rng.standard_normal((15, 2)) + c for c in centers])
        y = np.repeat([0, 1, 2], 15)
        model = train_logreg(X, y, l2_lambda=0.001)
        assert (model.predict(X) == y).mean() == 1.0

    def test_deterministic(self):
        X, y = separable_blobs(seed=5, gap=1.5)
        m1 = train_logreg(X, y, l2_lambda=0.01)
        m2 = train_logreg(X, y, l2_lambda=0.01)
        assert np.array_equal(m1.weights["W"], m2.weights["W"])
        assert np.array_equal(m1.weights["b"], m2.weights["b"])


class TestSgd:
    def test_learning_rate_formula(self):
        assert learning_rate(0.01, 0.5, 100) == pytest.approx(0.001, rel=1e-12)

    def test_hinge_margins_positive_on_separable_data(self):
        X, y = separable_blobs(seed=1, gap=5.0)
        spec = LinearModelSpec(family="sgd", loss="hinge", alpha=1e-4,
                               l1_ratio=0.15, max_epochs=50, seed=7)
        model = train_sgd(X, y, spec)
        w, b = model.weights["W"][0], model.weights["b"][0]
        margins = (2.0 * y - 1.0) * (X @ w + b)
        assert np.all(margins > 0)

    def test_lasso_limit_produces_exact_zeros(self):
        # pure-L1 penalty with a large alpha: the proximal soft-threshold
        # must pin most coefficients to exactly 0.0, not merely near it
        rng = np.random.Generator(np.random.PCG64(2))
        X = rng.standard_normal((80, 30))
        beta = np.zeros(30)
        beta[:3] = [3.0, -2.0, 1.5]
        y = (X @ beta + 0.1 * rng.standard_normal(80) > 0).astype(int)
        spec = LinearModelSpec(family="sgd", loss="log", alpha=0.5, l1_ratio=1.0,
                               max_epochs=30, seed=3)
        model = train_sgd(X, y, spec)
        w = model.weights["W"][0]
        assert np.mean(w == 0.0) >= 0.5

    def test_log_loss_learns_blobs(self):
        X, y = separable_blobs(seed=6, gap=3.0)
        spec = LinearModelSpec(family="sgd", loss="log", alpha=1e-4,
                               l1_ratio=0.3, max_epochs=40, seed=1)
        model = train_sgd(X, y, spec)
        assert (model.predict(X) == y).mean() >= 0.95

    def test_one_vs_rest_multiclass(self):
        rng = np.random.Generator(np.random.PCG64(9))
        centers = np.array([[6, 0], [-6, 6], [0, -6]], dtype=float)
        X = np.vstack([rng.standard_normal((20, 2)) + c for c in centers])
        y = np.repeat([0, 1, 2], 20)
        spec = LinearModelSpec(family="sgd", loss="hinge", alpha=1e-4,
                               l1_ratio=0.1, max_epochs=60, seed=12)
        model = train_sgd(X, y, spec)
        assert model.weights["W"].shape == (3, 2)
        assert (model.predict(X) == y).mean() >= 0.95

    def test_determinism_bitwise(self):
        X, y = separable_blobs(seed=10, gap=2.0)
        spec = LinearModelSpec(family="sgd", loss="log", alpha=1e-3,
                               l1_ratio=0.5, max_epochs=10, seed=21)
        m1 = train_sgd(X, y, spec)
        m2 = train_sgd(X, y, spec)
        assert np.array_equal(m1.weights["W"], m2.weights["W"])
        assert np.array_equal(m1.weights["b"], m2.weights["b"])

    def test_spec_validation(self):
        with pytest.raises(ParameterError):
            LinearModelSpec(l1_ratio=1.5)
        with pytest.raises(ParameterError):
            LinearModelSpec(alpha=0.0)
        with pytest.raises(ParameterError):
            LinearModelSpec(loss="squared")
