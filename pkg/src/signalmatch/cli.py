"""Command-line entry points: generate, tokenize, train, predict, eval,
curve, bench, serve."""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
from pathlib import Path

from . import data, evaluate
from .classifiers import METHODS, load_model, predict, save_model, train_model
from .preprocess import clean, normalize, tokenize
from .rerank import AntonymTable, KeywordSet, rerank

DEFAULT_SYNTH = dict(
    n_classes=50, n_projects=20, pairs_per_project=50, vocab_size=40, noise_rate=0.1
)


def _add_data_flags(parser: argparse.ArgumentParser, required: bool = False) -> None:
    parser.add_argument("--pairs", required=required, help="pairs CSV path")
    parser.add_argument("--library", required=required, help="library file path")
    parser.add_argument("--antonyms", help="antonym JSON path")
    parser.add_argument("--keywords", help="keyword file path")


def _add_model_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--method", choices=METHODS, default="tokvote")
    parser.add_argument("--alpha", type=float, default=1.0, help="NB smoothing")
    parser.add_argument("--max-n", type=int, default=3, help="token-vote n-gram size")


def _load_inputs(args) -> tuple:
    """Load pairs/library/antonyms/keywords, generating a synthetic corpus
    when no pairs file is given."""
    if args.pairs:
        if not args.library:
            raise SystemExit("--library is required when --pairs is given")
        ds = data.load_pairs(args.pairs)
        lib = data.load_library(args.library)
        ant = AntonymTable.load(args.antonyms) if args.antonyms else AntonymTable.empty()
        kw = KeywordSet.load(args.keywords) if args.keywords else KeywordSet.empty()
        return ds, lib, ant, kw
    cfg = data.SynthConfig(seed=args.seed, **DEFAULT_SYNTH)
    corpus = data.generate_synthetic(cfg)
    return corpus.dataset, corpus.library, corpus.antonyms, corpus.keywords


def cmd_generate(args) -> int:
    cfg = data.SynthConfig(
        n_classes=args.classes,
        n_projects=args.projects,
        pairs_per_project=args.pairs_per_project,
        vocab_size=args.vocab,
        noise_rate=args.noise,
        seed=args.seed,
    )
    corpus = data.generate_synthetic(cfg)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    data.save_pairs(corpus.dataset, out / "pairs.csv")
    data.save_library(corpus.library, out / "library.txt")
    corpus.antonyms.save(out / "antonyms.json")
    corpus.keywords.save(out / "keywords.txt")
    print(
        f"wrote {len(corpus.dataset.pairs)} pairs over {len(corpus.dataset.projects)} "
        f"projects, {len(corpus.library)} library names, "
        f"{corpus.n_corrupted} corrupted labels to {out}"
    )
    return 0


def cmd_tokenize(args) -> int:
    for token in tokenize(normalize(args.signal)):
        print(token)
    return 0


def cmd_train(args) -> int:
    ds = data.load_pairs(args.pairs)
    lib = data.load_library(args.library)
    cleaned, stats = clean(ds, lib)
    model = train_model(args.method, cleaned, alpha=args.alpha, max_n=args.max_n)
    save_model(model, args.out)
    print(
        f"trained {args.method} on {len(cleaned.pairs)} pairs "
        f"(dropped {stats.removed_unknown_library} outside library, "
        f"{stats.removed_identical} identical) -> {args.out}"
    )
    return 0


def cmd_predict(args) -> int:
    model = load_model(args.model)
    ant = AntonymTable.load(args.antonyms) if args.antonyms else AntonymTable.empty()
    kw = KeywordSet.load(args.keywords) if args.keywords else KeywordSet.empty()
    names = [
        line.strip()
        for line in Path(args.infile).read_text(encoding="utf-8").splitlines()
        if line.strip()
    ]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["customer_signal", "rank", "label", "score"])
    for name in names:
        preds = predict(model, name, args.k)
        preds = rerank(tokenize(normalize(name)), preds, ant, kw)
        for rank, (label, score) in enumerate(preds.entries, start=1):
            writer.writerow([name, rank, label, score])
    output = buf.getvalue()
    if args.out:
        Path(args.out).write_text(output, encoding="utf-8")
    else:
        sys.stdout.write(output)
    return 0


def _format_report_table(report: evaluate.EvalReport) -> str:
    rows = [
        ("method", report.method),
        ("queries", str(report.n_queries)),
        ("train pairs", str(report.n_train_pairs)),
        ("accuracy", f"{report.accuracy:.4f}"),
        (f"top-{report.k} accuracy", f"{report.top_k_accuracy[report.k]:.4f}"),
        ("weighted precision", f"{report.weighted_precision:.4f}"),
        ("weighted recall", f"{report.weighted_recall:.4f}"),
        ("weighted F1", f"{report.weighted_f1:.4f}"),
    ]
    width = max(len(name) for name, _ in rows)
    lines = [f"{name:<{width}}  {value}" for name, value in rows]
    for warning in report.warnings:
        lines.append(f"warning: {warning}")
    return "\n".join(lines)


def cmd_eval(args) -> int:
    ds, lib, ant, kw = _load_inputs(args)
    report = evaluate.run_eval(
        args.method,
        ds,
        lib,
        ant,
        kw,
        k=args.k,
        seed=args.seed,
        test_fraction=args.test_fraction,
        alpha=args.alpha,
        max_n=args.max_n,
    )
    print(_format_report_table(report))
    print(report.to_json())
    if args.json:
        Path(args.json).write_text(report.to_json() + "\n", encoding="utf-8")
    return 0


def cmd_curve(args) -> int:
    ds, lib, ant, kw = _load_inputs(args)
    fractions = [float(f) for f in args.fractions.split(",")] if args.fractions else None
    points = evaluate.learning_curve(
        args.method,
        ds,
        lib,
        ant,
        kw,
        fractions=fractions,
        k=args.k,
        seed=args.seed,
        test_fraction=args.test_fraction,
        alpha=args.alpha,
        max_n=args.max_n,
    )
    output = evaluate.curve_to_csv(points)
    if args.out:
        Path(args.out).write_text(output, encoding="utf-8")
    else:
        sys.stdout.write(output)
    return 0


def cmd_bench(args) -> int:
    ds, lib, _, _ = _load_inputs(args)
    cleaned, _ = clean(ds, lib)
    if args.queries:
        queries = [
            line.strip()
            for line in Path(args.queries).read_text(encoding="utf-8").splitlines()
            if line.strip()
        ]
    else:
        queries = [p.customer_signal for p in cleaned.pairs]
    report = evaluate.benchmark(
        args.method, cleaned, queries, k=args.k, alpha=args.alpha, max_n=args.max_n
    )
    print(report.to_json())
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import MatcherService, ServiceConfig, create_app

    config = ServiceConfig(
        pairs_path=args.pairs,
        library_path=args.library,
        antonyms_path=args.antonyms,
        keywords_path=args.keywords,
        confirm_log_path=args.confirm_log,
        method=args.method,
        default_k=args.k_default,
        alpha=args.alpha,
        max_n=args.max_n,
    )
    app = create_app(MatcherService(config), ui_dir=args.ui_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="signalmatch",
        description="Match free-form customer signal names to a provider library",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a synthetic corpus")
    p.add_argument("--classes", type=int, default=50)
    p.add_argument("--projects", type=int, default=20)
    p.add_argument("--pairs-per-project", type=int, default=50)
    p.add_argument("--vocab", type=int, default=40)
    p.add_argument("--noise", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("tokenize", help="print a signal name's tokens")
    p.add_argument("signal")
    p.set_defaults(func=cmd_tokenize)

    p = sub.add_parser("train", help="train and serialize a model")
    _add_model_flags(p)
    p.add_argument("--pairs", required=True)
    p.add_argument("--library", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="suggest labels for a file of names")
    p.add_argument("--model", required=True)
    p.add_argument("--in", dest="infile", required=True, help="one signal per line")
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--antonyms")
    p.add_argument("--keywords")
    p.add_argument("--out")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("eval", help="run a full evaluation")
    _add_model_flags(p)
    _add_data_flags(p)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--test-fraction", type=float, default=0.2)
    p.add_argument("--json", help="also write the report JSON here")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("curve", help="accuracy vs training-data fraction")
    _add_model_flags(p)
    _add_data_flags(p)
    p.add_argument("--fractions", help="comma-separated, e.g. 0.1,0.5,1.0")
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--test-fraction", type=float, default=0.2)
    p.add_argument("--out")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("bench", help="training/prediction timing and model size")
    _add_model_flags(p)
    _add_data_flags(p)
    p.add_argument("--queries", help="file of signals to predict, one per line")
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_bench)

    # every serve flag falls back to a SIGNALMATCH_* environment variable
    env = os.environ.get
    p = sub.add_parser("serve", help="run the HTTP suggestion service")
    _add_model_flags(p)
    p.add_argument("--pairs", default=env("SIGNALMATCH_PAIRS"),
                   required=env("SIGNALMATCH_PAIRS") is None)
    p.add_argument("--library", default=env("SIGNALMATCH_LIBRARY"),
                   required=env("SIGNALMATCH_LIBRARY") is None)
    p.add_argument("--antonyms", default=env("SIGNALMATCH_ANTONYMS"))
    p.add_argument("--keywords", default=env("SIGNALMATCH_KEYWORDS"))
    p.add_argument("--confirm-log",
                   default=env("SIGNALMATCH_CONFIRM_LOG", "confirmations.ndjson"))
    p.add_argument("--k-default", type=int,
                   default=int(env("SIGNALMATCH_K_DEFAULT", "10")))
    p.add_argument("--host", default=env("SIGNALMATCH_HOST", "127.0.0.1"))
    p.add_argument("--port", type=int, default=int(env("SIGNALMATCH_PORT", "8000")))
    p.add_argument("--ui-dir", default=env("SIGNALMATCH_UI_DIR"),
                   help="serve this directory as the web UI")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
