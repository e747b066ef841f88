"""Pipeline command line: train classifiers, build the dataset, train the evaluator."""

from __future__ import annotations

import argparse
import json
import sys

from sentichess_pipeline.dataset import BuildStats, build_sentichess, read_dataset, write_dataset
from sentichess_pipeline.export import emit_goldens, export_weights
from sentichess_pipeline.textmodel import (
    TextClassifier,
    TextConfig,
    train_quality,
    train_sentiment,
)
from sentichess_pipeline.tensorize import tensorize
from sentichess_pipeline.train import TrainingConfig, init_eval, train_eval


def _read_labeled_jsonl(path):
    examples = []
    with open(path, "r", encoding="utf-8") as f:
        for line in f:
            if line.strip():
                doc = json.loads(line)
                examples.append((doc["text"], doc["label"]))
    return examples


def _cmd_train_text(args) -> int:
    examples = _read_labeled_jsonl(args.examples)
    config = TextConfig(seed=args.seed, holdout_fraction=args.holdout)
    trainer = train_quality if args.task == "quality" else train_sentiment
    model, metrics = trainer(examples, config)
    model.save(args.out)
    holdout = "n/a" if metrics.holdout_accuracy is None else f"{metrics.holdout_accuracy:.3f}"
    print(
        f"trained {args.task} on {metrics.examples} examples: "
        f"train acc {metrics.train_accuracy:.3f}, holdout acc {holdout}"
    )
    return 0


def _cmd_build_dataset(args) -> int:
    quality = TextClassifier.load(args.quality_model)
    sentiment = TextClassifier.load(args.sentiment_model)
    corpus = []
    for path in args.corpus:
        with open(path, "r", encoding="utf-8") as f:
            corpus.append((path, f.read()))
    stats = BuildStats()
    records = build_sentichess(corpus, quality, sentiment, tau=args.tau, stats=stats)
    count = write_dataset(records, args.out)
    print(
        f"{count} records from {stats.games_seen} games "
        f"({stats.games_skipped} skipped, {stats.comments_seen} comments seen)"
    )
    return 0


def _cmd_train_eval(args) -> int:
    records = read_dataset(args.dataset)
    tensors, labels = tensorize(records)
    config = TrainingConfig(
        f1=args.f1, f2=args.f2, epochs=args.epochs, seed=args.seed,
        learning_rate=args.learning_rate, validation_fraction=args.validation_fraction,
    )
    trained = train_eval(tensors, labels, config)
    blob = export_weights(trained, args.out)
    val = trained.validation_accuracy
    val_text = "n/a" if val != val else f"{val:.3f}"  # NaN when no validation split
    print(
        f"trained on {len(tensors)} tensors: train acc {trained.train_accuracy:.3f}, "
        f"val acc {val_text}; wrote {len(blob)} bytes to {args.out}"
    )
    if args.goldens_out:
        emit_goldens(trained, args.goldens_n, args.seed, args.goldens_out, blob)
        print(f"wrote {args.goldens_n} goldens to {args.goldens_out}")
    return 0


def _cmd_emit_goldens(args) -> int:
    config = TrainingConfig(f1=args.f1, f2=args.f2, seed=args.seed)
    trained = init_eval(config)
    blob = export_weights(trained, args.weights_out)
    emit_goldens(trained, args.n, args.seed, args.out, blob)
    print(f"wrote {args.weights_out} and {args.n} goldens to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sentichess-pipeline", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train-text", help="train the quality or sentiment classifier")
    p.add_argument("--task", choices=("quality", "sentiment"), required=True)
    p.add_argument("--examples", required=True, help="jsonl with text/label fields")
    p.add_argument("--out", required=True, help="classifier artifact path")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--holdout", type=float, default=0.0)
    p.set_defaults(func=_cmd_train_text)

    p = sub.add_parser("build-dataset", help="emit sentichess records from commented PGN")
    p.add_argument("--corpus", nargs="+", required=True, help="PGN files")
    p.add_argument("--quality-model", required=True)
    p.add_argument("--sentiment-model", required=True)
    p.add_argument("--tau", type=float, default=0.8, help="quality threshold")
    p.add_argument("--out", required=True, help="output jsonl path")
    p.set_defaults(func=_cmd_build_dataset)

    p = sub.add_parser("train-eval", help="train the move evaluator and export SMW1")
    p.add_argument("--dataset", required=True, help="sentichess jsonl")
    p.add_argument("--out", required=True, help="SMW1 output path")
    p.add_argument("--f1", type=int, default=8)
    p.add_argument("--f2", type=int, default=8)
    p.add_argument("--epochs", type=int, default=20)
    p.add_argument("--learning-rate", type=float, default=1e-3)
    p.add_argument("--validation-fraction", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--goldens-out", help="also emit a golden fixture")
    p.add_argument("--goldens-n", type=int, default=32)
    p.set_defaults(func=_cmd_train_eval)

    p = sub.add_parser("emit-goldens", help="random-init weights plus golden fixture")
    p.add_argument("--out", required=True, help="goldens path")
    p.add_argument("--weights-out", required=True, help="SMW1 path")
    p.add_argument("--n", type=int, default=32)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--f1", type=int, default=4)
    p.add_argument("--f2", type=int, default=4)
    p.set_defaults(func=_cmd_emit_goldens)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError, RuntimeError) as exc:
        print(f"sentichess-pipeline: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
