import random

import pytest

from signalmatch.classifiers import RankedPredictions
from signalmatch.data import Dataset, SignalLibrary, SignalPair
from signalmatch.evaluate import (
    benchmark,
    curve_to_csv,
    learning_curve,
    run_eval,
    top_k_accuracy,
    weighted_prf,
)

from oracles import weighted_prf_confusion


def ranked(*labels):
    return RankedPredictions(tuple((l, 1.0 / (i + 1)) for i, l in enumerate(labels)))


class TestTopKAccuracy:
    def test_truth_within_list_counts(self):
        results = [(ranked(*"abcdefghij"), "g")]  # truth at rank 7
        assert top_k_accuracy(results, 10) == 1.0

    def test_truth_beyond_k_misses(self):
        results = [(ranked(*"abcdefghij"), "g")]
        assert top_k_accuracy(results, 5) == 0.0

    def test_empty_predictions_score_zero(self):
        results = [(RankedPredictions(()), "a")]
        assert top_k_accuracy(results, 3) == 0.0

    def test_empty_results_rejected(self):
        with pytest.raises(ValueError):
            top_k_accuracy([], 1)

    def test_monotone_in_k(self):
        rng = random.Random(7)
        labels = [f"l{i}" for i in range(12)]
        results = []
        for _ in range(60):
            order = rng.sample(labels, k=rng.randint(0, 8))
            results.append((ranked(*order), rng.choice(labels)))
        accs = [top_k_accuracy(results, k) for k in range(1, 10)]
        assert accs == sorted(accs)


class TestWeightedPrf:
    def test_perfect_predictions(self):
        results = [("a", "a"), ("b", "b"), ("a", "a")]
        assert weighted_prf(results) == (1.0, 1.0, 1.0)

    def test_half_correct_single_label(self):
        # truths all "a"; half predicted as an absent label "z"
        results = [("a", "a"), ("z", "a"), ("a", "a"), ("z", "a")]
        p, r, f = weighted_prf(results)
        assert r == 0.5
        assert p == 1.0  # "a" predicted twice, both correct
        assert f == pytest.approx(2 * 1.0 * 0.5 / 1.5)

    def test_weighted_recall_equals_accuracy(self):
        rng = random.Random(3)
        labels = [f"l{i}" for i in range(6)]
        for _ in range(30):
            results = [
                (rng.choice(labels), rng.choice(labels))
                for _ in range(rng.randint(1, 40))
            ]
            accuracy = sum(1 for p, t in results if p == t) / len(results)
            _, recall, _ = weighted_prf(results)
            assert recall == pytest.approx(accuracy, abs=1e-12)

    def test_matches_confusion_matrix_oracle_exactly(self):
        rng = random.Random(17)
        labels = [f"l{i}" for i in range(8)]
        for _ in range(30):
            results = [
                (rng.choice(labels + [None]), rng.choice(labels)) for _ in range(50)
            ]
            assert weighted_prf(results) == weighted_prf_confusion(results)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            weighted_prf([])


class TestRunEval:
    def test_deterministic(self, noisy_corpus):
        c = noisy_corpus
        a = run_eval("tokvote", c.dataset, c.library, c.antonyms, c.keywords, seed=5)
        b = run_eval("tokvote", c.dataset, c.library, c.antonyms, c.keywords, seed=5)
        assert a == b
        assert a.to_json() == b.to_json()

    def test_report_shape(self, noisy_corpus):
        c = noisy_corpus
        rep = run_eval("tokvote", c.dataset, c.library, c.antonyms, c.keywords, k=10, seed=5)
        assert rep.n_queries == rep.n_test_pairs > 0
        assert set(rep.top_k_accuracy) == set(range(1, 11))
        assert rep.accuracy == rep.top_k_accuracy[1]
        accs = [rep.top_k_accuracy[k] for k in range(1, 11)]
        assert accs == sorted(accs)
        assert 0.0 <= rep.weighted_f1 <= 1.0

    def test_disjoint_lookup_scores_zero_and_warns(self):
        pairs = [SignalPair("p1", "alpha beta", "x"), SignalPair("p2", "gamma delta", "y")]
        ds = Dataset(pairs)
        lib = SignalLibrary.from_names(["x", "y"])
        rep = run_eval("lookup", ds, lib, k=3, seed=1)
        assert rep.accuracy == 0.0
        assert rep.warnings

    def test_tokvote_on_noiseless_calibrated_data(self, noiseless_corpus):
        c = noiseless_corpus
        rep = run_eval("tokvote", c.dataset, c.library, c.antonyms, c.keywords, seed=3)
        assert rep.accuracy >= 0.95

    def test_unknown_method_rejected(self, noisy_corpus):
        c = noisy_corpus
        with pytest.raises(ValueError, match="method"):
            run_eval("svm", c.dataset, c.library)

    def test_rerank_only_permutes_the_suggestion_list(self, noisy_corpus):
        # with and without rerank rules, the set of labels in each k-length
        # list is the same, so the top-k hit rate at the full list length
        # cannot change
        c = noisy_corpus
        with_rules = run_eval(
            "tokvote", c.dataset, c.library, c.antonyms, c.keywords, k=10, seed=2
        )
        without_rules = run_eval("tokvote", c.dataset, c.library, k=10, seed=2)
        assert (
            with_rules.top_k_accuracy[10] == without_rules.top_k_accuracy[10]
        )


class TestLearningCurve:
    def test_full_fraction_matches_run_eval(self, noisy_corpus):
        c = noisy_corpus
        rep = run_eval("tokvote", c.dataset, c.library, c.antonyms, c.keywords, seed=5)
        points = learning_curve(
            "tokvote", c.dataset, c.library, c.antonyms, c.keywords,
            fractions=[1.0], seed=5,
        )
        assert points == [(1.0, rep.accuracy)]

    def test_default_fraction_grid(self, noisy_corpus):
        c = noisy_corpus
        points = learning_curve(
            "nb", c.dataset, c.library, c.antonyms, c.keywords, seed=5
        )
        assert [f for f, _ in points] == [round(0.1 * i, 1) for i in range(1, 11)]
        assert all(0.0 <= a <= 1.0 for _, a in points)

    def test_zero_project_fraction_rejected(self, noisy_corpus):
        c = noisy_corpus
        with pytest.raises(ValueError):
            learning_curve(
                "tokvote", c.dataset, c.library, fractions=[0.001], seed=5
            )

    def test_csv_emission(self):
        csv = curve_to_csv([(0.5, 0.25), (1.0, 0.5)])
        assert csv == "fraction,accuracy\n0.5,0.25\n1.0,0.5\n"


class TestBenchmark:
    def test_reports_sane_numbers(self, noisy_corpus):
        from signalmatch.preprocess import clean

        c = noisy_corpus
        cleaned, _ = clean(c.dataset, c.library)
        queries = [p.customer_signal for p in cleaned.pairs[:50]]
        rep = benchmark("tokvote", cleaned, queries, min_predictions=200)
        assert rep.training_time_s >= 0.0
        assert rep.mean_prediction_time_ms >= 0.0
        assert rep.model_size_bytes > 0
        assert rep.n_predictions >= 200

    def test_requires_queries(self, noisy_corpus):
        with pytest.raises(ValueError):
            benchmark("tokvote", noisy_corpus.dataset, [])
