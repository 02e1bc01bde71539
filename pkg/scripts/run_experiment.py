#!/usr/bin/env python3
"""Full method comparison on a synthetic corpus: classification metrics,
learning curves, and runtime/model-size benchmarks for the lookup table,
Naive Bayes and the token-vote model."""

import argparse

from signalmatch.classifiers import METHODS
from signalmatch.data import SynthConfig, generate_synthetic
from signalmatch.evaluate import benchmark, learning_curve, run_eval
from signalmatch.preprocess import clean


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--classes", type=int, default=150)
    parser.add_argument("--projects", type=int, default=30)
    parser.add_argument("--pairs-per-project", type=int, default=300)
    parser.add_argument("--vocab", type=int, default=150)
    parser.add_argument("--noise", type=float, default=0.1)
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--k", type=int, default=10)
    args = parser.parse_args()

    cfg = SynthConfig(
        n_classes=args.classes,
        n_projects=args.projects,
        pairs_per_project=args.pairs_per_project,
        vocab_size=args.vocab,
        noise_rate=args.noise,
        seed=args.seed,
    )
    corpus = generate_synthetic(cfg)
    print(
        f"corpus: {len(corpus.dataset.pairs)} pairs, "
        f"{len(corpus.dataset.projects)} projects, "
        f"{len(corpus.library)} library names, "
        f"{corpus.n_corrupted} corrupted labels"
    )

    print(f"\n{'method':8}  {'acc':>6}  {'top-' + str(args.k):>7}  {'F1':>6}  {'recall':>6}")
    for method in METHODS:
        rep = run_eval(
            method, corpus.dataset, corpus.library, corpus.antonyms, corpus.keywords,
            k=args.k, seed=args.seed,
        )
        print(
            f"{method:8}  {rep.accuracy:6.3f}  {rep.top_k_accuracy[args.k]:7.3f}  "
            f"{rep.weighted_f1:6.3f}  {rep.weighted_recall:6.3f}"
        )

    print("\nlearning curve (token-vote accuracy by training fraction)")
    points = learning_curve(
        "tokvote", corpus.dataset, corpus.library, corpus.antonyms, corpus.keywords,
        k=args.k, seed=args.seed,
    )
    print("  " + "  ".join(f"{f:.1f}:{acc:.3f}" for f, acc in points))

    print(f"\n{'method':8}  {'train s':>8}  {'predict ms':>10}  {'size bytes':>10}")
    cleaned, _ = clean(corpus.dataset, corpus.library)
    queries = [p.customer_signal for p in cleaned.pairs[:2000]]
    for method in METHODS:
        rep = benchmark(method, cleaned, queries, k=args.k)
        print(
            f"{method:8}  {rep.training_time_s:8.2f}  "
            f"{rep.mean_prediction_time_ms:10.3f}  {rep.model_size_bytes:10d}"
        )


if __name__ == "__main__":
    main()
