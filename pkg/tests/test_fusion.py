"""Fusion tests: SMO correctness, metrics against exhaustive oracles, pipeline."""

import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lddetect import analysis, chardist
from lddetect.errors import ConvergenceError, InputError
from lddetect.fusion import (
    LetterDivergenceTransformer,
    RbfSvm,
    auroc,
    build_reference,
    calibrate_threshold,
    evaluate_baseline,
    evaluate_scores,
    f1_score,
    featurize,
    kkt_residual,
    train,
)
from lddetect.rng import derive, numpy_gen


def oracle_auroc(scores, labels):
    """Exhaustive pairwise comparison, ties counted one half."""
    pos = [s for s, y in zip(scores, labels) if y == 1]
    neg = [s for s, y in zip(scores, labels) if y != 1]
    wins = sum(1.0 if p > n else 0.5 if p == n else 0.0 for p in pos for n in neg)
    return wins / (len(pos) * len(neg))


def oracle_best_f1(scores, labels):
    """Max F1 over the documented candidate threshold set."""
    uniq = sorted(set(scores))
    candidates = [uniq[0]] + [(a + b) / 2 for a, b in zip(uniq, uniq[1:])]
    return max(f1_score(scores, labels, t) for t in candidates)


class TestReferenceAndFeatures:
    def test_pooling(self):
        ref = build_reference(["aa", "bb"])
        assert ref.p[0] == 0.5 and ref.p[1] == 0.5

    def test_single_text_equals_letter_distribution(self):
        text = "quite ordinary sample"
        assert np.array_equal(build_reference([text]).p, chardist.letter_distribution(text).p)

    def test_pool_matches_concatenation_oracle(self):
        texts = ["alpha beta", "gamma delta", "epsilon"]
        pooled = build_reference(texts)
        concatenated = chardist.letter_distribution(" ".join(texts))
        assert np.allclose(pooled.p, concatenated.p, atol=1e-15)

    def test_featurize_passthrough_and_zero(self):
        ref = build_reference(["shared text"])
        vec = featurize("shared text", 0.42, ref)
        assert vec[0] == 0.42
        assert vec[1] == 0.0

    def test_featurize_rejects_nonfinite(self):
        ref = build_reference(["abc"])
        with pytest.raises(InputError):
            featurize("abc", float("nan"), ref)

    def test_human_ld_exceeds_ai_median_on_synthetic_wall(self):
        global_dist = analysis.zipf_word_distribution(1000, 1.1)
        human_src = analysis.tilt_word_distribution(global_dist, 0.7, seed=derive(1, "skew"))
        reference = chardist.project_word_to_letter(global_dist)
        ai = analysis.sample_letter_projections(global_dist, 800, 31, derive(1, "ai"))
        human = analysis.sample_letter_projections(human_src, 800, 1, derive(1, "hu"))[0]
        ai_lds = sorted(chardist.ld_score(d, reference) for d in ai)
        human_ld = chardist.ld_score(human, reference)
        assert human_ld > ai_lds[len(ai_lds) // 2]

    def test_transformer_roundtrip(self):
        ref_texts = ["base corpus of text", "more of the corpus"]
        t = LetterDivergenceTransformer().fit(ref_texts)
        col = t.transform(["base corpus of text", "zzz qqq"])
        assert col.shape == (2, 1)
        assert col[1, 0] > col[0, 0]


class TestSmo:
    def test_xor_with_rbf(self):
        X = np.array([[0.0, 0.0], [1.0, 1.0], [0.0, 1.0], [1.0, 0.0]])
        y = np.array([1.0, 1.0, -1.0, -1.0])
        model = RbfSvm(C=10.0, gamma=1.0).fit(X, y)
        assert np.array_equal(model.predict(X), y)

    def test_separable_blobs_reach_full_training_accuracy(self):
        rng = numpy_gen(12, "blobs")
        X = np.vstack([rng.normal(0, 0.5, (40, 2)), rng.normal(6.0, 0.5, (40, 2))])
        y = np.array([-1.0] * 40 + [1.0] * 40)
        model = RbfSvm(C=1.0, gamma=1.0).fit(X, y)
        assert np.array_equal(model.predict(X), y)

    def test_dual_constraints(self):
        rng = numpy_gen(0, "blobs")
        X = np.vstack([rng.normal(0, 1, (30, 2)), rng.normal(2.5, 1, (30, 2))])
        y = np.array([-1.0] * 30 + [1.0] * 30)
        model = RbfSvm(C=1.5, gamma=0.8).fit(X, y)
        assert np.all(model.alpha_ >= -1e-9)
        assert np.all(model.alpha_ <= 1.5 + 1e-9)
        assert abs(float(np.sum(model.alpha_ * y))) <= 1e-9
        assert kkt_residual(model, X, y) <= model.tol + 1e-9

    def test_two_point_closed_form(self):
        # Standardized points are -1 and +1 on the first axis; the dual
        # optimum is alpha = 1 / (1 - K12) for both points with zero bias.
        X = np.array([[1.0, 0.0], [3.0, 0.0]])
        y = np.array([1.0, -1.0])
        gamma = 0.5
        model = RbfSvm(C=100.0, gamma=gamma).fit(X, y)
        k12 = math.exp(-gamma * 4.0)
        expected_alpha = 1.0 / (1.0 - k12)
        assert model.alpha_ == pytest.approx([expected_alpha, expected_alpha], abs=1e-6)
        assert model.intercept_ == pytest.approx(0.0, abs=1e-9)
        assert model.decision_function(X) == pytest.approx([1.0, -1.0], abs=1e-6)

    def test_two_point_clipped_at_box(self):
        X = np.array([[0.0, 0.0], [1.0, 1.0]])
        y = np.array([1.0, -1.0])
        model = RbfSvm(C=0.25, gamma=1.0).fit(X, y)
        assert model.alpha_ == pytest.approx([0.25, 0.25], abs=1e-12)
        assert model.intercept_ == pytest.approx(0.0, abs=1e-9)

    def test_label_flip_antisymmetry(self):
        rng = numpy_gen(1, "blobs")
        X = np.vstack([rng.normal(0, 1, (25, 2)), rng.normal(1.5, 1, (25, 2))])
        y = np.array([-1.0] * 25 + [1.0] * 25)
        m1 = RbfSvm(C=2.0, gamma=1.0).fit(X, y)
        m2 = RbfSvm(C=2.0, gamma=1.0).fit(X, -y)
        assert np.max(np.abs(m1.decision_function(X) + m2.decision_function(X))) <= 1e-9

    def test_far_query_decays_to_bias(self):
        X = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
        y = np.array([1.0, 1.0, -1.0, -1.0])
        model = RbfSvm(C=1.0, gamma=50.0).fit(X, y)
        far = np.array([[1e3, -1e3]])
        assert model.decision_function(far)[0] == pytest.approx(model.intercept_, abs=1e-12)

    def test_single_class_rejected(self):
        with pytest.raises(InputError, match="single class"):
            RbfSvm().fit(np.zeros((3, 2)), np.ones(3))

    def test_bad_labels_rejected(self):
        with pytest.raises(InputError, match="labels"):
            RbfSvm().fit(np.zeros((4, 2)), np.array([0.0, 1.0, 0.0, 1.0]))

    def test_iteration_cap_raises_with_residual(self):
        rng = numpy_gen(2, "hard")
        X = rng.normal(0, 1, (60, 2))
        y = np.where(rng.uniform(size=60) < 0.5, 1.0, -1.0)
        y[0], y[1] = 1.0, -1.0
        with pytest.raises(ConvergenceError) as err:
            RbfSvm(C=5.0, gamma=1.0, max_iter=3).fit(X, y)
        assert err.value.kkt_residual > 0

    def test_reproducible_training(self):
        rng = numpy_gen(3, "blobs")
        X = np.vstack([rng.normal(0, 1, (20, 2)), rng.normal(2, 1, (20, 2))])
        y = np.array([-1.0] * 20 + [1.0] * 20)
        m1 = train(X, y, c=1.0, gamma=1.0, seed=5)
        m2 = train(X, y, c=1.0, gamma=1.0, seed=5)
        assert m1.to_dict() == m2.to_dict()

    def test_decision_invariant_under_feature_rescaling(self):
        # Power-of-two factors commute exactly with float arithmetic, so the
        # standardized features (and hence the whole deterministic training
        # run) are bit-identical; other factors are only tolerance-limited.
        rng = numpy_gen(4, "blobs")
        X = np.vstack([rng.normal(0, 1, (20, 2)), rng.normal(2, 1, (20, 2))])
        y = np.array([-1.0] * 20 + [1.0] * 20)
        m1 = RbfSvm(C=1.0, gamma=1.0).fit(X, y)
        for scale in (np.array([32.0, 0.0078125]), np.array([0.25, 1024.0])):
            m2 = RbfSvm(C=1.0, gamma=1.0).fit(X * scale, y)
            diff = np.max(np.abs(m1.decision_function(X) - m2.decision_function(X * scale)))
            assert diff <= 1e-9

    def test_matches_libsvm_solution(self):
        rng = numpy_gen(5, "blobs")
        X = np.vstack([rng.normal(0, 1, (50, 2)), rng.normal(1.2, 1, (50, 2))])
        y = np.array([-1.0] * 50 + [1.0] * 50)
        model = RbfSvm(C=2.0, gamma=0.7, tol=1e-6).fit(X, y)
        sklearn_svm = pytest.importorskip("sklearn.svm")
        xs = (X - model.scaler_mean_) / model.scaler_scale_
        ref = sklearn_svm.SVC(C=2.0, gamma=0.7, tol=1e-6).fit(xs, y)
        diff = np.max(np.abs(model.decision_function(X) - ref.decision_function(xs)))
        assert diff <= 1e-3


class TestModelSerialization:
    def test_round_trip_preserves_decisions(self, tmp_path):
        rng = numpy_gen(6, "blobs")
        X = np.vstack([rng.normal(0, 1, (15, 2)), rng.normal(2, 1, (15, 2))])
        y = np.array([-1.0] * 15 + [1.0] * 15)
        model = RbfSvm(C=1.0, gamma=1.0).fit(X, y)
        path = tmp_path / "model.json"
        model.save(path)
        loaded = RbfSvm.load(path)
        assert np.array_equal(model.decision_function(X), loaded.decision_function(X))
        assert loaded.threshold_ == model.threshold_
        obj = json.loads(path.read_text())
        assert obj["format"].endswith("/1")

    def test_bad_format_rejected(self):
        with pytest.raises(InputError, match="format"):
            RbfSvm.from_dict({"format": "something-else"})


class TestAuroc:
    def test_perfect_and_ties(self):
        assert auroc([1, 2, 3, 4], [-1, -1, 1, 1]) == 1.0
        assert auroc([5, 5, 5, 5], [-1, -1, 1, 1]) == 0.5

    def test_hand_case(self):
        assert auroc([0.1, 0.4, 0.35, 0.8], [-1, -1, 1, 1]) == 0.75

    def test_single_class_rejected(self):
        with pytest.raises(InputError):
            auroc([1, 2], [1, 1])

    @given(
        st.lists(st.integers(min_value=0, max_value=8), min_size=2, max_size=40).filter(
            lambda xs: len(xs) >= 2
        ),
        st.data(),
    )
    @settings(max_examples=150)
    def test_matches_exhaustive_oracle(self, score_source, data):
        n = len(score_source)
        labels = data.draw(
            st.lists(st.sampled_from([-1, 1]), min_size=n, max_size=n).filter(
                lambda ys: 1 in ys and -1 in ys
            )
        )
        scores = [s / 4.0 for s in score_source]  # plenty of ties
        assert auroc(scores, labels) == oracle_auroc(scores, labels)


class TestThresholdCalibration:
    def test_perfectly_separated_picks_gap(self):
        scores = [0.0, 0.1, 0.9, 1.0]
        labels = [-1, -1, 1, 1]
        t = calibrate_threshold(scores, labels)
        assert t == 0.5
        assert f1_score(scores, labels, t) == 1.0

    def test_all_equal_goes_all_positive(self):
        scores = [2.0] * 6
        labels = [1, 1, -1, -1, -1, -1]
        t = calibrate_threshold(scores, labels)
        assert t == 2.0
        p = 2 / 6
        assert f1_score(scores, labels, t) == pytest.approx(2 * p / (p + 1))

    def test_matches_exhaustive_oracle(self):
        rng = numpy_gen(7, "cal")
        for _ in range(50):
            scores = list(np.round(rng.uniform(0, 1, 20), 2))
            labels = list(np.where(rng.uniform(size=20) < 0.5, 1, -1))
            if 1 not in labels or -1 not in labels:
                continue
            t = calibrate_threshold(scores, labels)
            assert f1_score(scores, labels, t) == oracle_best_f1(scores, labels)

    def test_tie_breaks_to_smallest(self):
        scores = [0.0, 1.0, 2.0, 3.0]
        labels = [-1, 1, -1, 1]  # F1 is maximized at 0.5 and elsewhere equally
        t = calibrate_threshold(scores, labels)
        candidates = [0.0, 0.5, 1.5, 2.5]
        best = oracle_best_f1(scores, labels)
        first = next(c for c in candidates if f1_score(scores, labels, c) == best)
        assert t == first


class TestEvaluate:
    def test_confusion_consistency(self):
        scores = [-1.0, -1.0, 1.0, 1.0, 1.0]
        labels = [-1, -1, 1, 1, -1]
        report = evaluate_scores(scores, labels, threshold=0.0)
        assert report.tpr == 1.0
        assert report.fpr == pytest.approx(1 / 3)
        assert report.f1 == pytest.approx(2 * 2 / (2 * 2 + 1 + 0))
        assert (report.n_pos, report.n_neg) == (2, 3)

    def test_threshold_above_all(self):
        report = evaluate_scores([0.1, 0.2, 0.3], [1, -1, 1], threshold=10.0)
        assert report.tpr == 0.0 and report.fpr == 0.0

    def test_baseline_path(self):
        train_scores = [0.0, 0.1, 0.9, 1.0]
        train_labels = [-1, -1, 1, 1]
        report = evaluate_baseline(train_scores, train_labels, [0.05, 0.95], [-1, 1])
        assert report.f1 == 1.0 and report.auroc == 1.0

    def test_augmented_equals_baseline_when_ld_constant(self):
        # Degenerate second feature: the SVM sees one informative axis and
        # the separated eval set yields identical metrics either way.
        rng = numpy_gen(8, "deg")
        base_h = rng.uniform(0.0, 1.0, 40)
        base_a = rng.uniform(2.0, 3.0, 40)
        scores = np.concatenate([base_h, base_a])
        y = np.array([-1.0] * 40 + [1.0] * 40)
        X = np.column_stack([scores, np.full(80, 0.123)])
        tr = np.r_[0:20, 40:60]
        ev = np.r_[20:40, 60:80]
        baseline = evaluate_baseline(scores[tr], y[tr], scores[ev], y[ev])
        model = RbfSvm(C=1.0, gamma=1.0).fit(X[tr], y[tr])
        augmented = evaluate_scores(model.decision_function(X[ev]), y[ev], model.threshold_)
        assert augmented == baseline
