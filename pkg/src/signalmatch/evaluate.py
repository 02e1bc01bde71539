"""Metric computation, end-to-end evaluation runs, learning curves and
runtime/size benchmarks."""

from __future__ import annotations

import json
import random
import time
from collections import Counter
from dataclasses import dataclass

from .classifiers import (
    RankedPredictions,
    predict,
    serialize_model,
    train_model,
)
from .data import Dataset, SignalLibrary, split_by_project
from .preprocess import clean, normalize, tokenize
from .rerank import AntonymTable, KeywordSet, rerank


@dataclass(frozen=True)
class EvalReport:
    """Metric bundle for one evaluation run."""

    method: str
    k: int
    seed: int
    n_queries: int
    n_train_pairs: int
    n_test_pairs: int
    accuracy: float
    top_k_accuracy: dict[int, float]
    weighted_precision: float
    weighted_recall: float
    weighted_f1: float
    warnings: tuple[str, ...] = ()

    def to_json(self) -> str:
        doc = {
            "method": self.method,
            "k": self.k,
            "seed": self.seed,
            "n_queries": self.n_queries,
            "n_train_pairs": self.n_train_pairs,
            "n_test_pairs": self.n_test_pairs,
            "accuracy": self.accuracy,
            "top_k_accuracy": {str(kk): v for kk, v in self.top_k_accuracy.items()},
            "weighted_precision": self.weighted_precision,
            "weighted_recall": self.weighted_recall,
            "weighted_f1": self.weighted_f1,
            "warnings": list(self.warnings),
        }
        return json.dumps(doc, sort_keys=True, ensure_ascii=False)


@dataclass(frozen=True)
class BenchReport:
    """Wall-clock training time, mean prediction latency and serialized size."""

    method: str
    training_time_s: float
    mean_prediction_time_ms: float
    model_size_bytes: int
    n_predictions: int

    def to_json(self) -> str:
        doc = {
            "method": self.method,
            "training_time_s": self.training_time_s,
            "mean_prediction_time_ms": self.mean_prediction_time_ms,
            "model_size_bytes": self.model_size_bytes,
            "n_predictions": self.n_predictions,
        }
        return json.dumps(doc, sort_keys=True, ensure_ascii=False)


def top_k_accuracy(
    results: list[tuple[RankedPredictions, str]], k: int
) -> float:
    """Fraction of queries whose truth appears among the first k suggestions."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if not results:
        raise ValueError("no results to score")
    hits = sum(1 for preds, truth in results if truth in preds.labels()[:k])
    return hits / len(results)


def weighted_prf(
    results: list[tuple[str | None, str]]
) -> tuple[float, float, float]:
    """Support-weighted precision, recall and F1 over (top-1, truth) pairs.

    Per-label metrics are one-vs-rest; weights are proportional to each
    label's support among the truths.  A label never predicted gets
    precision 0; a label with zero precision and recall gets F1 0.
    """
    if not results:
        raise ValueError("no results to score")
    support: Counter = Counter(truth for _, truth in results)
    predicted: Counter = Counter(pred for pred, _ in results if pred is not None)
    correct: Counter = Counter(
        truth for pred, truth in results if pred == truth
    )
    n = len(results)
    weighted_p = 0.0
    weighted_r = 0.0
    weighted_f = 0.0
    for label in sorted(support):
        tp = correct[label]
        p = tp / predicted[label] if predicted[label] else 0.0
        r = tp / support[label]
        f = 2 * p * r / (p + r) if p + r > 0 else 0.0
        weighted_p += support[label] * p
        weighted_r += support[label] * r
        weighted_f += support[label] * f
    return weighted_p / n, weighted_r / n, weighted_f / n


def _evaluate_split(
    method: str,
    train: Dataset,
    test: Dataset,
    antonyms: AntonymTable,
    keywords: KeywordSet,
    k: int,
    alpha: float,
    max_n: int,
) -> list[tuple[RankedPredictions, str]]:
    """Train on `train`, predict+rerank every test pair. Both sets pre-cleaned."""
    model = train_model(method, train, alpha=alpha, max_n=max_n)
    results = []
    for pair in test.pairs:
        preds = predict(model, pair.customer_signal, k)
        preds = rerank(
            tokenize(normalize(pair.customer_signal)), preds, antonyms, keywords
        )
        results.append((preds, normalize(pair.library_signal)))
    return results


def run_eval(
    method: str,
    ds: Dataset,
    lib: SignalLibrary,
    antonyms: AntonymTable | None = None,
    keywords: KeywordSet | None = None,
    k: int = 10,
    seed: int = 0,
    test_fraction: float = 0.2,
    alpha: float = 1.0,
    max_n: int = 3,
) -> EvalReport:
    """Project-wise split, clean, train, predict top-k with rerank, score.

    Deterministic for fixed inputs and seed.
    """
    antonyms = antonyms or AntonymTable.empty()
    keywords = keywords or KeywordSet.empty()
    train_raw, test_raw = split_by_project(ds, test_fraction, seed)
    train, _ = clean(train_raw, lib)
    test, _ = clean(test_raw, lib)
    if not test.pairs:
        raise ValueError("no test queries survive cleaning")
    results = _evaluate_split(method, train, test, antonyms, keywords, k, alpha, max_n)
    topk = {kk: top_k_accuracy(results, kk) for kk in range(1, k + 1)}
    accuracy = topk[1]
    top1 = [
        (preds.labels()[0] if preds.entries else None, truth)
        for preds, truth in results
    ]
    precision, recall, f1 = weighted_prf(top1)
    warnings = []
    if accuracy == 0.0:
        warnings.append("top-1 accuracy is zero on this split")
    return EvalReport(
        method=method,
        k=k,
        seed=seed,
        n_queries=len(results),
        n_train_pairs=len(train.pairs),
        n_test_pairs=len(test.pairs),
        accuracy=accuracy,
        top_k_accuracy=topk,
        weighted_precision=precision,
        weighted_recall=recall,
        weighted_f1=f1,
        warnings=tuple(warnings),
    )


def learning_curve(
    method: str,
    ds: Dataset,
    lib: SignalLibrary,
    antonyms: AntonymTable | None = None,
    keywords: KeywordSet | None = None,
    fractions: list[float] | None = None,
    k: int = 10,
    seed: int = 0,
    test_fraction: float = 0.2,
    alpha: float = 1.0,
    max_n: int = 3,
) -> list[tuple[float, float]]:
    """Top-1 accuracy against the fraction of training projects used.

    The test split is fixed; training subsets are nested (every smaller
    subset is contained in the larger ones) to cut run-to-run variance.
    A fraction of 1.0 reproduces the run_eval training set exactly.
    """
    antonyms = antonyms or AntonymTable.empty()
    keywords = keywords or KeywordSet.empty()
    if fractions is None:
        fractions = [round(0.1 * i, 1) for i in range(1, 11)]
    train_raw, test_raw = split_by_project(ds, test_fraction, seed)
    train, _ = clean(train_raw, lib)
    test, _ = clean(test_raw, lib)
    if not test.pairs:
        raise ValueError("no test queries survive cleaning")
    train_projects = sorted(train.projects)
    rng = random.Random(f"curve:{seed}")
    rng.shuffle(train_projects)
    points = []
    for fraction in fractions:
        if not 0.0 < fraction <= 1.0:
            raise ValueError(f"fractions must be in (0, 1], got {fraction}")
        n_projects = min(len(train_projects), int(fraction * len(train_projects) + 0.5))
        if n_projects == 0:
            raise ValueError(
                f"fraction {fraction} of {len(train_projects)} projects is empty"
            )
        subset = train.restrict_to_projects(train_projects[:n_projects])
        results = _evaluate_split(method, subset, test, antonyms, keywords, k, alpha, max_n)
        points.append((fraction, top_k_accuracy(results, 1)))
    return points


def curve_to_csv(points: list[tuple[float, float]]) -> str:
    lines = ["fraction,accuracy"]
    lines += [f"{fraction},{accuracy}" for fraction, accuracy in points]
    return "\n".join(lines) + "\n"


def benchmark(
    method: str,
    train: Dataset,
    queries: list[str],
    k: int = 10,
    min_predictions: int = 1000,
    alpha: float = 1.0,
    max_n: int = 3,
) -> BenchReport:
    """Time training and mean per-query prediction; measure serialized size.

    Predictions run single-threaded and cycle through the queries until at
    least min_predictions have been made.
    """
    if not queries:
        raise ValueError("benchmark needs at least one query")
    t0 = time.perf_counter()
    model = train_model(method, train, alpha=alpha, max_n=max_n)
    training_time = time.perf_counter() - t0

    n = max(min_predictions, len(queries))
    t0 = time.perf_counter()
    for i in range(n):
        predict(model, queries[i % len(queries)], k)
    prediction_time = time.perf_counter() - t0

    size = len(serialize_model(model).encode("utf-8"))
    return BenchReport(
        method=method,
        training_time_s=training_time,
        mean_prediction_time_ms=prediction_time / n * 1000.0,
        model_size_bytes=size,
        n_predictions=n,
    )
