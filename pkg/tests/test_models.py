import math
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from phishguard.ingest import ClassLabel
from phishguard.models import (
    LogisticModel,
    ModelError,
    classify_vector,
    explain,
    lr_decision_score,
    lr_fit,
    lr_objective,
    lr_predict_proba,
    nb_fit,
    nb_predict_proba,
    top_features,
)
from phishguard.vectorize import SparseVector, TfidfConfig, Vocabulary, fit as fit_vocab

L, P = ClassLabel.LEGITIMATE, ClassLabel.PHISHING


def sv(dense, dim=None):
    dim = len(dense) if dim is None else dim
    pairs = [(i, float(v)) for i, v in enumerate(dense) if v]
    return SparseVector(tuple(i for i, _ in pairs), tuple(v for _, v in pairs), dim)


def nb_oracle(X_dense, y, alpha, query):
    """Dense log-space posterior, written out term by term in plain Python."""
    n = len(y)
    dim = len(X_dense[0])
    scores = []
    for c in (0, 1):
        rows = [x for x, label in zip(X_dense, y) if int(label) == c]
        prior = math.log(len(rows) / n)
        sums = [sum(r[i] for r in rows) for i in range(dim)]
        total = sum(sums)
        loglik = 0.0
        for i in range(dim):
            p_feature = (sums[i] + alpha) / (total + alpha * dim)
            loglik += query[i] * math.log(p_feature)
        scores.append(prior + loglik)
    m = max(scores)
    exps = [math.exp(s - m) for s in scores]
    z = sum(exps)
    return exps[0] / z, exps[1] / z


class TestNaiveBayesFit:
    def test_two_doc_hand_values(self):
        model = nb_fit([sv([1.0, 0.0]), sv([0.0, 1.0])], [L, P], alpha=1.0)
        assert model.feature_log_prob[0][0] == pytest.approx(math.log(2 / 3), abs=1e-15)
        assert model.feature_log_prob[0][1] == pytest.approx(math.log(1 / 3), abs=1e-15)
        assert model.class_log_prior[0] == pytest.approx(math.log(0.5), abs=1e-15)
        assert model.class_log_prior[1] == pytest.approx(math.log(0.5), abs=1e-15)

    def test_symmetric_corpus_empty_doc_gets_priors(self):
        model = nb_fit([sv([1.0, 0.0]), sv([0.0, 1.0])], [L, P])
        assert nb_predict_proba(model, sv([0.0, 0.0])) == (0.5, 0.5)

    def test_single_class_rejected(self):
        with pytest.raises(ModelError, match="both classes"):
            nb_fit([sv([1.0]), sv([1.0])], [P, P])

    def test_negative_values_rejected(self):
        with pytest.raises(ModelError, match="non-negative"):
            nb_fit([sv([-1.0]), sv([1.0])], [L, P])

    def test_length_mismatch_rejected(self):
        with pytest.raises(ModelError):
            nb_fit([sv([1.0])], [L, P])

    def test_likelihood_rows_normalized(self):
        model = nb_fit([sv([1.0, 2.0, 0.0]), sv([0.0, 1.0, 3.0])], [L, P], alpha=0.5)
        rows = np.exp(model.feature_log_prob).sum(axis=1)
        assert np.abs(rows - 1.0).max() < 1e-9


class TestNaiveBayesOracle:
    def test_four_doc_toy_corpus(self):
        X = [sv([2, 0, 1]), sv([1, 1, 0]), sv([0, 3, 1]), sv([0, 1, 2])]
        y = [L, L, P, P]
        model = nb_fit(X, y, alpha=1.0)
        query = [1.0, 2.0, 0.5]
        expected = nb_oracle([[2, 0, 1], [1, 1, 0], [0, 3, 1], [0, 1, 2]], y, 1.0, query)
        got = nb_predict_proba(model, sv(query))
        assert got[0] == pytest.approx(expected[0], abs=1e-12)
        assert got[1] == pytest.approx(expected[1], abs=1e-12)

    def test_randomized_corpora_match_oracle(self):
        rng = random.Random(20260809)
        for trial in range(100):
            n_docs = rng.randint(2, 10)
            dim = rng.randint(1, 10)
            alpha = rng.choice([0.25, 0.5, 1.0, 2.0])
            while True:
                y = [rng.choice([L, P]) for _ in range(n_docs)]
                if len(set(y)) == 2:
                    break
            X_dense = [
                [rng.choice([0.0, 0.0, rng.random() * 3]) for _ in range(dim)]
                for _ in range(n_docs)
            ]
            query = [rng.choice([0.0, rng.random() * 2]) for _ in range(dim)]
            model = nb_fit([sv(row) for row in X_dense], y, alpha=alpha)
            got = nb_predict_proba(model, sv(query, dim))
            expected = nb_oracle(X_dense, y, alpha, query)
            assert got[0] == pytest.approx(expected[0], abs=1e-12)
            assert got[1] == pytest.approx(expected[1], abs=1e-12)

    def test_posterior_sums_to_one(self):
        model = nb_fit([sv([1.0, 0.5]), sv([0.0, 2.0])], [L, P])
        p0, p1 = nb_predict_proba(model, sv([3.0, 1.0]))
        assert abs(p0 + p1 - 1.0) <= 1e-12

    def test_dimension_mismatch(self):
        model = nb_fit([sv([1.0]), sv([2.0])], [L, P])
        with pytest.raises(ModelError, match="dimension"):
            nb_predict_proba(model, sv([1.0, 1.0]))


def random_dense_problem(rng, n=20, dim=10):
    X = [sv([rng.gauss(0, 1) for _ in range(dim)]) for _ in range(n)]
    y = [L] * (n // 2) + [P] * (n - n // 2)
    rng.shuffle(y)
    if len(set(y)) < 2:
        y[0] = L
        y[1] = P
    return X, y


class TestLogisticGradient:
    def test_matches_central_differences(self):
        """Analytic gradient vs central differences at random points."""
        rng = random.Random(42)
        h = 1e-5
        for trial in range(5):
            X, y = random_dense_problem(rng)
            objective = lr_objective(X, y, C=1.0)
            w = np.array([rng.gauss(0, 0.5) for _ in range(11)])
            _, grad = objective(w)
            for j in range(len(w)):
                bump = np.zeros_like(w)
                bump[j] = h
                f_plus, _ = objective(w + bump)
                f_minus, _ = objective(w - bump)
                numeric = (f_plus - f_minus) / (2 * h)
                denom = max(abs(numeric), abs(grad[j]), 1e-8)
                assert abs(grad[j] - numeric) / denom < 1e-6

    def test_value_matches_independent_formula(self):
        rng = random.Random(7)
        X, y = random_dense_problem(rng, n=8, dim=4)
        objective = lr_objective(X, y, C=0.7)
        w = np.array([rng.gauss(0, 1) for _ in range(5)])
        value, _ = objective(w)

        def stable_log1pexp(z):
            return max(0.0, z) + math.log1p(math.exp(-abs(z)))

        beta, b = w[:-1], w[-1]
        expected = 0.5 * sum(v * v for v in beta)
        for x, label in zip(X, y):
            dense = [0.0] * 4
            for i, v in zip(x.indices, x.values):
                dense[i] = v
            margin = b + sum(bi * xi for bi, xi in zip(beta, dense))
            ysign = 1.0 if label is P else -1.0
            expected += 0.7 * stable_log1pexp(-ysign * margin)
        assert value == pytest.approx(expected, rel=1e-12)


class TestLogisticFit:
    def test_separable_two_points(self):
        X = [sv([1.0]), sv([-1.0])]
        model = lr_fit(X, [P, L], C=1.0)
        assert model.converged
        assert lr_predict_proba(model, X[0]) > 0.5
        assert lr_predict_proba(model, X[1]) < 0.5

    def test_feature_free_balanced_is_all_zero(self):
        X = [sv([], dim=3) for _ in range(4)]
        model = lr_fit(X, [L, L, P, P])
        assert np.all(model.weights == 0.0)
        assert model.intercept == 0.0
        assert lr_predict_proba(model, sv([], dim=3)) == 0.5

    def test_single_class_rejected(self):
        with pytest.raises(ModelError, match="both classes"):
            lr_fit([sv([1.0]), sv([2.0])], [P, P])

    def test_objective_decreases_monotonically(self):
        rng = random.Random(3)
        X, y = random_dense_problem(rng, n=30, dim=8)
        model = lr_fit(X, y)
        history = model.objective_history
        assert len(history) >= 2
        assert all(later <= earlier + 1e-12 for earlier, later in zip(history, history[1:]))

    def test_bit_identical_across_runs(self):
        rng = random.Random(11)
        X, y = random_dense_problem(rng, n=25, dim=6)
        a = lr_fit(X, y)
        b = lr_fit(X, y)
        assert a.weights.tobytes() == b.weights.tobytes()
        assert a.intercept == b.intercept
        assert a.n_iter == b.n_iter

    def test_training_config_recorded(self):
        model = lr_fit([sv([1.0]), sv([-1.0])], [P, L], C=2.0, max_iter=500, tol=1e-5, seed=9)
        assert (model.C, model.max_iter, model.tol, model.seed) == (2.0, 500, 1e-5, 9)


class TestLogisticPredict:
    def test_zero_model_gives_half(self):
        model = LogisticModel(np.zeros(3), 0.0, 1.0, 1, 1e-4, 0, True, 0)
        assert lr_predict_proba(model, sv([5.0, -2.0, 1.0])) == 0.5

    def test_overflow_safe(self):
        model = LogisticModel(np.zeros(1), 800.0, 1.0, 1, 1e-4, 0, True, 0)
        p = lr_predict_proba(model, sv([0.0]))
        assert 0.0 < p <= 1.0 and not math.isnan(p)
        low = LogisticModel(np.zeros(1), -800.0, 1.0, 1, 1e-4, 0, True, 0)
        assert lr_predict_proba(low, sv([0.0])) == 0.0

    def test_sigmoid_of_log3(self):
        model = LogisticModel(np.ones(1), 0.0, 1.0, 1, 1e-4, 0, True, 0)
        assert lr_predict_proba(model, sv([math.log(3.0)])) == pytest.approx(0.75, abs=1e-15)

    @given(st.floats(-30, 30), st.floats(0.01, 30))
    def test_strictly_monotone_in_score(self, score, delta):
        model = LogisticModel(np.ones(1), 0.0, 1.0, 1, 1e-4, 0, True, 0)
        lower = lr_predict_proba(model, sv([score]))
        upper = lr_predict_proba(model, sv([score + delta]))
        assert upper > lower

    @given(st.floats(0.1, 50))
    def test_positive_scaling_never_flips_label(self, lam):
        base = LogisticModel(np.array([1.5, -0.5]), 0.25, 1.0, 1, 1e-4, 0, True, 0)
        scaled = LogisticModel(base.weights * lam, base.intercept * lam, 1.0, 1, 1e-4, 0, True, 0)
        for dense in ([1.0, 0.0], [0.0, 1.0], [1.0, 4.0], [0.0, 0.0]):
            x = sv(dense)
            assert (lr_predict_proba(base, x) >= 0.5) == (lr_predict_proba(scaled, x) >= 0.5)


@pytest.fixture
def small_vocab():
    return fit_vocab(
        [["apple", "banana"], ["apple", "cherry"], ["banana", "cherry"]],
        TfidfConfig(min_df=1, max_df=1.0, ngram_max=1, max_features=10),
    )


class TestTopFeatures:
    def make_model(self, weights):
        return LogisticModel(np.asarray(weights, dtype=float), 0.0, 1.0, 1, 1e-4, 0, True, 0)

    def test_direct_extremes(self, small_vocab):
        model = self.make_model([2.0, -3.0, 1.0])
        phishing, legitimate = top_features(model, small_vocab, 1)
        assert phishing == [("apple", 2.0)]
        assert legitimate == [("banana", -3.0)]

    def test_k_larger_than_dim_returns_all(self, small_vocab):
        model = self.make_model([2.0, -3.0, 1.0])
        phishing, legitimate = top_features(model, small_vocab, 50)
        assert phishing == [("apple", 2.0), ("cherry", 1.0)]
        assert legitimate == [("banana", -3.0)]

    def test_ties_break_lexicographically(self, small_vocab):
        model = self.make_model([1.0, 1.0, 1.0])
        phishing, _ = top_features(model, small_vocab, 2)
        assert phishing == [("apple", 1.0), ("banana", 1.0)]

    def test_k_below_one_rejected(self, small_vocab):
        with pytest.raises(ModelError):
            top_features(self.make_model([1.0, 0.0, -1.0]), small_vocab, 0)


class TestExplain:
    def test_empty_vector(self, small_vocab):
        model = LogisticModel(np.ones(3), 0.0, 1.0, 1, 1e-4, 0, True, 0)
        assert explain(model, SparseVector((), (), 3), small_vocab) == []

    def test_single_active_feature(self, small_vocab):
        model = LogisticModel(np.array([2.0, 0.5, -1.0]), 0.0, 1.0, 1, 1e-4, 0, True, 0)
        x = SparseVector((1,), (3.0,), 3)
        assert explain(model, x, small_vocab) == [("banana", 1.5)]

    def test_contributions_reconstruct_score(self, small_vocab):
        model = LogisticModel(np.array([2.0, 0.5, -1.0]), 0.7, 1.0, 1, 1e-4, 0, True, 0)
        x = SparseVector((0, 2), (1.5, 2.0), 3)
        total = sum(c for _, c in explain(model, x, small_vocab))
        assert total + model.intercept == pytest.approx(lr_decision_score(model, x), abs=1e-9)


class TestClassifyVector:
    def test_threshold_ties_go_to_phishing(self, small_vocab):
        model = LogisticModel(np.zeros(3), 0.0, 1.0, 1, 1e-4, 0, True, 0)
        prediction = classify_vector(model, SparseVector((), (), 3), small_vocab)
        assert prediction.p_phishing == 0.5
        assert prediction.label is P

    def test_nb_prediction_carries_indicators(self, small_vocab):
        X = [sv([1.0, 0.0, 0.0]), sv([0.0, 1.0, 1.0])]
        model = nb_fit(X, [L, P])
        prediction = classify_vector(model, sv([0.0, 2.0, 0.0]), small_vocab, top_k=5)
        assert prediction.label is P
        assert prediction.contributions[0][0] == "banana"
        assert prediction.contributions[0][1] > 0
