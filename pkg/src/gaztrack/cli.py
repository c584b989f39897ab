"""Command-line entry point for the batch pipeline and the service.

Exit codes: 0 success, 2 usage error, 3 domain/data error, 4 internal
error. Every command accepts ``--json`` for stable machine-readable
output (keys sorted, two-space indent); diagnostics go to stderr only.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from collections import Counter
from dataclasses import replace

from .config import AppConfig, load_config
from .dataset import DatasetStats, GroupClass, compute_stats, load_gat
from .errors import GaztrackError
from .evaluation import evaluate_predictions, nb_trainer, run_cv
from .features import build_vocab, tokenize, vectorize
from .ingest import load_corpus
from .naive_bayes import (
    PredictionFile,
    PredictionRow,
    load_model,
    predict_nb,
    predictions_csv_text,
    read_predictions,
    save_model,
    train_nb,
    write_predictions,
)
from .rules import format_rules, load_demo_rules, load_rules, parse_rules
from .service import create_app
from .store import Store

# Published figures for the environmental-gazette tracker corpus; the
# `stats` command reports how a given file deviates from them.
REFERENCE_STATS = {
    "n_records": 1181,
    "group_proportions": {
        "Regulation": 0.520,
        "Neutral": 0.185,
        "Deregulation": 0.295,
    },
    "action_words_mean": 29.1,
    "action_words_std": 19.6,
    "circumstance_words_mean": 70.0,
    "circumstance_words_std": 54.0,
    "date_min": "2019-01-01",
    "date_max": "2021-07-12",
}
# Published figures are rounded: proportions to 0.1 pp, word counts to
# one decimal; the tolerances absorb exactly that rounding.
_PROPORTION_TOL = 0.0005
_WORDS_TOL = 0.05


def _emit(payload: dict) -> None:
    print(json.dumps(payload, sort_keys=True, ensure_ascii=False, indent=2))


def _effective_config(args: argparse.Namespace) -> AppConfig:
    config = load_config(getattr(args, "config", None))
    overrides = {}
    for name in ("rules_path", "data_dir", "seed", "k", "alpha", "min_df", "port", "host", "ui_dir"):
        value = getattr(args, name, None)
        if value is not None:
            overrides[name] = value
    return replace(config, **overrides) if overrides else config


def _load_ruleset(config: AppConfig):
    if config.rules_path:
        return load_rules(config.rules_path)
    return load_demo_rules()


# ---------------------------------------------------------------------------
# Commands

def cmd_ingest(args: argparse.Namespace) -> int:
    config = _effective_config(args)
    rules = _load_ruleset(config)
    docs = load_corpus(args.path, format=args.format)
    with Store(config.data_dir) as store:
        items = store.enqueue(docs, rules)
    theme_counts = Counter(t for item in items for t in item.matched_themes)
    if args.json:
        _emit(
            {
                "received": len(docs),
                "enqueued": len(items),
                "themes": dict(sorted(theme_counts.items())),
            }
        )
    else:
        print(f"received {len(docs)} documents; enqueued {len(items)} for review")
        for theme, count in sorted(theme_counts.items()):
            print(f"  {theme:<28}{count:>6}")
    return 0


def cmd_classify(args: argparse.Namespace) -> int:
    records = load_gat(args.gat)
    model, vocab = load_model(args.model)
    rows = []
    for r in records:
        predicted, scores = predict_nb(model, vectorize(tokenize(r.context), vocab))
        if len(scores) < len(GroupClass):  # degenerate single-class model
            scores = {g: scores.get(g, -math.inf) for g in GroupClass}
        rows.append(PredictionRow(r.record_id, predicted, scores))
    preds = PredictionFile(rows=tuple(rows))
    if args.out:
        write_predictions(preds, args.out)
        if args.json:
            _emit({"n_predictions": len(rows), "out": args.out})
        else:
            print(f"wrote {len(rows)} predictions to {args.out}")
    else:
        print(predictions_csv_text(preds), end="")
    return 0


def cmd_train(args: argparse.Namespace) -> int:
    config = _effective_config(args)
    records = load_gat(args.gat)
    tokenized = [tokenize(r.context) for r in records]
    vocab = build_vocab(tokenized, min_df=config.min_df)
    examples = [
        (vectorize(tokens, vocab), r.group_class)
        for tokens, r in zip(tokenized, records)
    ]
    model = train_nb(examples, config.alpha, vocab_size=vocab.size)
    save_model(model, vocab, args.out)
    priors = {
        c.value: math.exp(lp) for c, lp in zip(model.classes, model.log_prior)
    }
    if args.json:
        _emit(
            {
                "out": args.out,
                "n_records": len(records),
                "vocab_size": vocab.size,
                "alpha": config.alpha,
                "min_df": config.min_df,
                "priors": priors,
            }
        )
    else:
        print(
            f"trained on {len(records)} records; vocabulary {vocab.size} tokens; "
            f"model saved to {args.out}"
        )
        for name, prior in priors.items():
            print(f"  prior {name:<16}{prior:.4f}")
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    config = _effective_config(args)
    records = load_gat(args.gat)
    report = run_cv(
        records,
        nb_trainer(alpha=config.alpha, min_df=config.min_df),
        k=config.k,
        seed=config.seed,
    )
    if args.json:
        _emit(report.to_json_dict())
    else:
        print(report.format_table())
    return 0


def cmd_evaluate_preds(args: argparse.Namespace) -> int:
    records = load_gat(args.gat)
    preds = read_predictions(args.preds)
    cm, metrics = evaluate_predictions(records, preds)
    if args.json:
        _emit({"confusion": cm.to_dict(), "metrics": metrics})
    else:
        for name in ("mcc", "acc", "weighted_f1"):
            print(f"{name:<14}{metrics[name]:.3f}")
        labels = cm.to_dict()["classes"]
        corner = "true \\ pred"
        print(f"{corner:<16}" + "".join(f"{c:>14}" for c in labels))
        for label, row in zip(labels, cm.counts):
            print(f"{label:<16}" + "".join(f"{v:>14}" for v in row))
    return 0


def _stat_deviations(stats: DatasetStats) -> list[str]:
    deviations = []
    if stats.n_records != REFERENCE_STATS["n_records"]:
        deviations.append("n_records")
    for group, expected in REFERENCE_STATS["group_proportions"].items():
        actual = stats.group_proportions[GroupClass(group)]
        if abs(actual - expected) > _PROPORTION_TOL:
            deviations.append(f"group_proportions.{group}")
    for field in (
        "action_words_mean",
        "action_words_std",
        "circumstance_words_mean",
        "circumstance_words_std",
    ):
        if abs(getattr(stats, field) - REFERENCE_STATS[field]) > _WORDS_TOL:
            deviations.append(field)
    for field in ("date_min", "date_max"):
        if getattr(stats, field).isoformat() != REFERENCE_STATS[field]:
            deviations.append(field)
    return deviations


def cmd_stats(args: argparse.Namespace) -> int:
    records = load_gat(args.gat)
    stats = compute_stats(records)
    deviations = _stat_deviations(stats)
    if args.json:
        _emit(
            {
                "stats": stats.to_dict(),
                "reference": REFERENCE_STATS,
                "deviations": deviations,
            }
        )
    else:
        def flag(name: str) -> str:
            return "  DEVIATES" if name in deviations else ""

        print(f"records            {stats.n_records}  (reference "
              f"{REFERENCE_STATS['n_records']}){flag('n_records')}")
        for group in ("Regulation", "Neutral", "Deregulation"):
            actual = stats.group_proportions[GroupClass(group)]
            expected = REFERENCE_STATS["group_proportions"][group]
            print(
                f"  {group:<16} {actual:6.1%}  (reference {expected:.1%})"
                f"{flag(f'group_proportions.{group}')}"
            )
        print(
            f"action words       {stats.action_words_mean:.1f} ± "
            f"{stats.action_words_std:.1f}  (reference "
            f"{REFERENCE_STATS['action_words_mean']} ± "
            f"{REFERENCE_STATS['action_words_std']})"
            f"{flag('action_words_mean')}{flag('action_words_std')}"
        )
        print(
            f"circumstance words {stats.circumstance_words_mean:.1f} ± "
            f"{stats.circumstance_words_std:.1f}  (reference "
            f"{REFERENCE_STATS['circumstance_words_mean']} ± "
            f"{REFERENCE_STATS['circumstance_words_std']})"
            f"{flag('circumstance_words_mean')}{flag('circumstance_words_std')}"
        )
        print(
            f"dates              {stats.date_min} .. {stats.date_max}  "
            f"(reference {REFERENCE_STATS['date_min']} .. "
            f"{REFERENCE_STATS['date_max']})"
            f"{flag('date_min')}{flag('date_max')}"
        )
    return 0


def cmd_rules_check(args: argparse.Namespace) -> int:
    ruleset = load_rules(args.file)
    reparsed = parse_rules(format_rules(ruleset))
    stable = reparsed.rules == ruleset.rules
    if args.json:
        _emit(
            {
                "themes": ruleset.theme_names(),
                "version": ruleset.version,
                "round_trip_stable": stable,
            }
        )
    else:
        print(f"{len(ruleset.rules)} themes, version {ruleset.version}")
        for name in ruleset.theme_names():
            print(f"  {name}")
        print(f"round-trip: {'stable' if stable else 'UNSTABLE'}")
    return 0 if stable else 4


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    config = _effective_config(args)
    app = create_app(config)
    uvicorn.run(app, host=config.host, port=config.port)
    return 0


# ---------------------------------------------------------------------------
# Parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="path to a JSON config file")
    common.add_argument(
        "--json", action="store_true", help="machine-readable output (stable keys)"
    )

    parser = argparse.ArgumentParser(
        prog="gaztrack",
        description="Track regulatory acts in official gazettes: route them "
        "to review by theme rules, classify them, and evaluate the model.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "ingest", parents=[common], help="load documents and queue rule matches"
    )
    p.add_argument("path", help="JSONL file or directory of XML files")
    p.add_argument("--format", choices=("jsonl", "xml-dir"), default="jsonl")
    p.add_argument("--rules", dest="rules_path", help="rules file (default: bundled)")
    p.add_argument("--data-dir", dest="data_dir", help="store directory")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser(
        "classify", parents=[common], help="predict groups for tracker records"
    )
    p.add_argument("gat", help="records CSV")
    p.add_argument("--model", required=True, help="trained model file")
    p.add_argument("--out", help="predictions CSV path (default: stdout)")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("train", parents=[common], help="train the classifier")
    p.add_argument("gat", help="records CSV")
    p.add_argument("--out", default="model.json", help="model file to write")
    p.add_argument("--alpha", type=float, help="Laplace smoothing (default 1.0)")
    p.add_argument("--min-df", dest="min_df", type=int, help="vocabulary cutoff")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser(
        "evaluate", parents=[common], help="stratified cross-validation report"
    )
    p.add_argument("gat", help="records CSV")
    p.add_argument("--k", type=int, help="number of folds (default 10)")
    p.add_argument("--seed", type=int, help="fold shuffle seed (default 42)")
    p.add_argument("--alpha", type=float, help="Laplace smoothing (default 1.0)")
    p.add_argument("--min-df", dest="min_df", type=int, help="vocabulary cutoff")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser(
        "evaluate-preds",
        parents=[common],
        help="score an external model's predictions",
    )
    p.add_argument("gat", help="records CSV")
    p.add_argument("preds", help="predictions CSV")
    p.set_defaults(func=cmd_evaluate_preds)

    p = sub.add_parser(
        "stats", parents=[common], help="corpus statistics vs published figures"
    )
    p.add_argument("gat", help="records CSV")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("rules", parents=[common], help="rule-file utilities")
    rules_sub = p.add_subparsers(dest="rules_command", required=True)
    pc = rules_sub.add_parser(
        "check", parents=[common], help="parse and verify a rules file"
    )
    pc.add_argument("file", help="rules file")
    pc.set_defaults(func=cmd_rules_check)

    p = sub.add_parser("serve", parents=[common], help="run the review service")
    p.add_argument("--host", help="bind address (default 127.0.0.1)")
    p.add_argument("--port", type=int, help="port (default 8000)")
    p.add_argument("--rules", dest="rules_path", help="rules file (default: bundled)")
    p.add_argument("--data-dir", dest="data_dir", help="store directory")
    p.add_argument("--ui-dir", dest="ui_dir", help="serve a built UI from this dir")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except GaztrackError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error [io]: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:  # pragma: no cover - defensive catch-all
        print(f"internal error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
