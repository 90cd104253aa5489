"""Command-line entry point: train, evaluate, predict, features, stats, serve.

Exit codes: 0 success, 2 bad arguments, 3 data errors (unreadable files,
bad schemas, empty corpora, broken bundles), 4 training errors. Output is
a human table on a terminal and JSON when piped; --json forces JSON.
"""

from __future__ import annotations

import argparse
import json
import os
import socket
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import evaluate, ingest, models, modelstore, preprocess, report, vectorize
from .vectorize import IdfMode

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_TRAINING = 4


class UsageError(Exception):
    """Flag combinations argparse cannot catch on its own."""


def _parse_dataset_spec(spec: str) -> tuple[Path, Path, str | None]:
    parts = spec.split(":")
    if len(parts) == 2:
        return Path(parts[0]), Path(parts[1]), None
    if len(parts) == 3:
        return Path(parts[0]), Path(parts[1]), parts[2]
    raise UsageError(f"--dataset expects CSV:SCHEMA[:SOURCE], got {spec!r}")


def _load_corpus(specs: list[str]) -> tuple[list[ingest.RawEmail], ingest.CorpusStats]:
    corpora = []
    dropped = 0
    for spec in specs:
        csv_path, schema_path, source = _parse_dataset_spec(spec)
        schema = ingest.DatasetSchema.from_file(schema_path)
        records, diag = ingest.load_csv(csv_path, schema, source=source)
        corpora.append(records)
        dropped += diag.dropped
    return ingest.merge(corpora, dropped_rows=dropped)


def _resolve_created_at(value: str | None) -> tuple[str, bool]:
    """Timestamp for artifacts; explicit values make outputs reproducible."""
    explicit = (
        value
        or os.environ.get("PHISHGUARD_CREATED_AT")
        or os.environ.get("SOURCE_DATE_EPOCH")
    )
    if explicit is None:
        return modelstore.utc_now_iso(), False
    if explicit.isdigit():
        stamp = datetime.fromtimestamp(int(explicit), tz=timezone.utc)
        return stamp.strftime("%Y-%m-%dT%H:%M:%SZ"), True
    return explicit, True


def _emit(args: argparse.Namespace, text: str, payload: dict) -> None:
    if args.json or not sys.stdout.isatty():
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def _tfidf_config(args: argparse.Namespace) -> vectorize.TfidfConfig:
    return vectorize.TfidfConfig(
        max_features=args.max_features,
        ngram_min=args.ngram_min,
        ngram_max=args.ngram_max,
        min_df=args.min_df,
        max_df=args.max_df,
        idf_mode=IdfMode(args.idf_mode),
    )


def _run_experiment(args: argparse.Namespace) -> evaluate.ExperimentResult:
    corpus, stats = _load_corpus(args.dataset)
    if not corpus:
        raise ingest.IngestError("datasets contain zero valid rows")
    split_spec = evaluate.SplitSpec(train_fraction=args.train_fraction, seed=args.seed)
    model_configs = evaluate.ModelConfigs(
        nb_alpha=args.alpha,
        lr_c=args.C,
        lr_max_iter=args.max_iter,
        lr_tol=args.tol,
        lr_seed=args.seed,
    )
    return evaluate.run_experiment(
        corpus, split_spec, _tfidf_config(args), model_configs, feature_k=args.top_k
    )


def _write_report(rows: list[dict], path: str | Path) -> None:
    Path(path).write_text(modelstore.canonical_json(rows) + "\n", encoding="utf-8")


def _summary_payload(args, result, rows) -> tuple[str, dict]:
    text = report.metrics_table(rows) + (
        f"\nvocabulary: {rows[0]['vocab_size']:,} terms, "
        f"sparsity {rows[0]['sparsity'] * 100:.2f}%, "
        f"split {result.n_train:,} train / {result.n_test:,} test"
    )
    payload = {
        "reports": rows,
        "n_train": result.n_train,
        "n_test": result.n_test,
    }
    return text, payload


def cmd_train(args: argparse.Namespace) -> int:
    result = _run_experiment(args)
    created_at, deterministic = _resolve_created_at(args.created_at)
    kind = "logistic_regression" if args.model == "lr" else "naive_bayes"
    chosen = result.lr_model if args.model == "lr" else result.nb_model
    rows = result.report_rows(zero_timings=deterministic)
    chosen_row = next(r for r in rows if r["model"] == kind)
    bundle = modelstore.ModelBundle(
        preprocess_config=preprocess.active_config(),
        vocab=result.vocab,
        model=chosen,
        created_at=created_at,
        metrics={
            "accuracy": chosen_row["accuracy"],
            "precision": chosen_row["precision"],
            "recall": chosen_row["recall"],
            "f1": chosen_row["f1"],
            "confusion": chosen_row["confusion"],
        },
    )
    modelstore.save(bundle, args.bundle_out, compress=args.compress)
    if args.report_out:
        _write_report(rows, args.report_out)
    if args.figures:
        report.render_experiment_figures(rows, result.top_features, args.figures)
    text, payload = _summary_payload(args, result, rows)
    payload["bundle"] = str(args.bundle_out)
    payload["model"] = kind
    _emit(args, text + f"\nbundle written to {args.bundle_out}", payload)
    return EXIT_OK


def cmd_evaluate(args: argparse.Namespace) -> int:
    result = _run_experiment(args)
    _, deterministic = _resolve_created_at(args.created_at)
    rows = result.report_rows(zero_timings=deterministic)
    if args.report_out:
        _write_report(rows, args.report_out)
    if args.figures:
        report.render_experiment_figures(rows, result.top_features, args.figures)
    text, payload = _summary_payload(args, result, rows)
    _emit(args, text, payload)
    return EXIT_OK


def cmd_stats(args: argparse.Namespace) -> int:
    corpus, stats = _load_corpus(args.dataset)
    duplicates, repeated_texts = ingest.duplicate_text_stats(corpus)
    if args.figures:
        outdir = Path(args.figures)
        outdir.mkdir(parents=True, exist_ok=True)
        report.plot_class_distribution(stats, outdir / "class_distribution.png")
        report.write_stats_csv(stats, outdir / "stats.csv")
    pct = f"{100 * stats.legitimate / stats.total:.1f}%" if stats.total else "-"
    text = report.stats_table(stats) + (
        f"\nlegitimate share: {pct}"
        f"\nexact-duplicate bodies: {duplicates} extra records across {repeated_texts} texts"
    )
    payload = {
        "per_source": {
            s: {"legitimate": l, "phishing": p} for s, (l, p) in stats.per_source.items()
        },
        "legitimate": stats.legitimate,
        "phishing": stats.phishing,
        "total": stats.total,
        "dropped_rows": stats.dropped_rows,
        "duplicate_records": duplicates,
        "duplicated_texts": repeated_texts,
    }
    _emit(args, text, payload)
    return EXIT_OK


def cmd_features(args: argparse.Namespace) -> int:
    if args.k < 1:
        print("error: -k must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    bundle = modelstore.load(args.model)
    if not isinstance(bundle.model, models.LogisticModel):
        print(
            "error: feature coefficients require a logistic-regression bundle; "
            "this bundle holds a Naive Bayes model",
            file=sys.stderr,
        )
        return EXIT_USAGE
    phishing, legitimate = models.top_features(bundle.model, bundle.vocab, args.k)
    if args.figures:
        outdir = Path(args.figures)
        outdir.mkdir(parents=True, exist_ok=True)
        report.plot_top_features(phishing, legitimate, outdir / "top_features.png")
    width = 44
    lines = [f"{'Phishing indicators':<{width}}Legitimate indicators"]
    for i in range(max(len(phishing), len(legitimate))):
        left = f"{phishing[i][0]:<28}{phishing[i][1]:>8.2f}" if i < len(phishing) else ""
        right = f"{legitimate[i][0]:<28}{legitimate[i][1]:>8.2f}" if i < len(legitimate) else ""
        lines.append(f"{left:<{width}}{right}")
    payload = {
        "phishing": [{"term": t, "coefficient": c} for t, c in phishing],
        "legitimate": [{"term": t, "coefficient": c} for t, c in legitimate],
    }
    _emit(args, "\n".join(lines), payload)
    return EXIT_OK


def cmd_predict(args: argparse.Namespace) -> int:
    bundle = modelstore.load(args.model)
    texts: list[str] = []
    for value in args.text or []:
        texts.append(value)
    for file_path in args.file or []:
        try:
            texts.append(Path(file_path).read_text(encoding="utf-8", errors="replace"))
        except OSError as exc:
            print(f"error: cannot read {file_path}: {exc}", file=sys.stderr)
            return EXIT_DATA
    if not texts:
        stdin_text = sys.stdin.read()
        if not stdin_text.strip():
            print("error: no input text (empty stdin)", file=sys.stderr)
            return EXIT_DATA
        texts.append(stdin_text)
    for text in texts:
        if not text.strip():
            print("error: input text is empty", file=sys.stderr)
            return EXIT_DATA
        prediction = bundle.predict(text, top_k=args.top_k)
        p = prediction.p_phishing
        print(json.dumps({
            "label": "phishing" if prediction.label is ingest.ClassLabel.PHISHING else "legitimate",
            "p_phishing": p,
            "confidence": max(p, 1.0 - p),
            "indicators": [
                {"term": t, "weight": w} for t, w in prediction.contributions
            ],
        }, sort_keys=True))
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    from . import service

    bundle = modelstore.load(args.model)
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    try:
        probe.bind((args.bind, args.port))
    except OSError as exc:
        print(f"error: cannot bind {args.bind}:{args.port}: {exc}", file=sys.stderr)
        return EXIT_DATA
    finally:
        probe.close()

    import uvicorn

    app = service.create_app(
        bundle, top_k=args.top_k, cors_origins=tuple(args.cors_origin)
    )
    uvicorn.run(app, host=args.bind, port=args.port, log_level="warning")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phishguard",
        description="Phishing email classification: corpus tools, training, and serving.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="force JSON output")
    common.add_argument("--seed", type=int, default=42,
                        help="seed for the stratified split and training provenance")

    data = argparse.ArgumentParser(add_help=False)
    data.add_argument("--dataset", action="append", required=True,
                      metavar="CSV:SCHEMA[:SOURCE]",
                      help="dataset CSV plus its JSON schema; repeatable")

    experiment = argparse.ArgumentParser(add_help=False)
    experiment.add_argument("--config", metavar="PATH",
                            help="JSON file of flag defaults (explicit flags win)")
    experiment.add_argument("--max-features", type=int, default=5000,
                            help="vocabulary size cap")
    experiment.add_argument("--ngram-min", type=int, default=1)
    experiment.add_argument("--ngram-max", type=int, default=2)
    experiment.add_argument("--min-df", type=int, default=2,
                            help="drop terms in fewer documents than this")
    experiment.add_argument("--max-df", type=float, default=0.95,
                            help="drop terms in a greater fraction of documents")
    experiment.add_argument("--idf-mode", choices=[m.value for m in IdfMode],
                            default=IdfMode.SMOOTHED_NORMALIZED.value)
    experiment.add_argument("--train-fraction", type=float, default=0.8)
    experiment.add_argument("--alpha", type=float, default=1.0,
                            help="Naive Bayes smoothing constant")
    experiment.add_argument("--C", type=float, default=1.0,
                            help="inverse regularization strength")
    experiment.add_argument("--max-iter", type=int, default=1000)
    experiment.add_argument("--tol", type=float, default=1e-4,
                            help="gradient infinity-norm stopping tolerance")
    experiment.add_argument("--top-k", type=int, default=10,
                            help="indicator terms per class in reports")
    experiment.add_argument("--report-out", metavar="PATH",
                            help="write the per-model JSON report here")
    experiment.add_argument("--figures", metavar="DIR",
                            help="render figures and metrics.csv into this directory")
    experiment.add_argument("--created-at", metavar="TIMESTAMP",
                            help="fixed artifact timestamp (ISO-8601 or epoch seconds); "
                                 "makes train outputs byte-reproducible")

    train = sub.add_parser("train", parents=[common, data, experiment],
                           help="train both models, persist the chosen one")
    train.add_argument("--model", choices=["lr", "nb"], default="lr",
                       help="which trained model goes into the bundle")
    train.add_argument("--bundle-out", required=True, metavar="PATH")
    train.add_argument("--compress", action="store_true",
                       help="gzip the bundle file")
    train.set_defaults(func=cmd_train)

    ev = sub.add_parser("evaluate", parents=[common, data, experiment],
                        help="run the train/test experiment without persisting")
    ev.set_defaults(func=cmd_evaluate)

    stats = sub.add_parser("stats", parents=[common, data],
                           help="per-source class distribution of the corpora")
    stats.add_argument("--figures", metavar="DIR",
                       help="render the class-distribution chart and stats.csv")
    stats.set_defaults(func=cmd_stats)

    features = sub.add_parser("features", parents=[common],
                              help="strongest coefficients of a trained bundle")
    features.add_argument("--model", required=True, metavar="BUNDLE")
    features.add_argument("-k", type=int, default=10, help="terms per class")
    features.add_argument("--figures", metavar="DIR")
    features.set_defaults(func=cmd_features)

    predict = sub.add_parser("predict", parents=[common],
                             help="classify email text from flags, files, or stdin")
    predict.add_argument("--model", required=True, metavar="BUNDLE")
    predict.add_argument("--text", action="append", help="email body; repeatable")
    predict.add_argument("--file", action="append", help="file holding one email body")
    predict.add_argument("--top-k", type=int, default=10)
    predict.set_defaults(func=cmd_predict)

    serve = sub.add_parser("serve", parents=[common],
                           help="run the HTTP prediction service")
    serve.add_argument("--model", default=os.environ.get("PHISHGUARD_MODEL"),
                       metavar="BUNDLE")
    serve.add_argument("--port", type=int,
                       default=int(os.environ.get("PHISHGUARD_PORT", "8000")))
    serve.add_argument("--bind", default=os.environ.get("PHISHGUARD_BIND", "127.0.0.1"))
    serve.add_argument("--top-k", type=int,
                       default=int(os.environ.get("PHISHGUARD_TOP_K", "10")))
    serve.add_argument("--cors-origin", action="append",
                       default=None, help="allowed CORS origin; repeatable")
    serve.set_defaults(func=cmd_serve)
    return parser


_CONFIGURABLE = {
    "max_features": int, "ngram_min": int, "ngram_max": int, "min_df": int,
    "max_df": float, "idf_mode": str, "train_fraction": float, "alpha": float,
    "C": float, "max_iter": int, "tol": float, "top_k": int, "seed": int,
}


def _apply_config_file(parser: argparse.ArgumentParser, argv: list[str]) -> None:
    """Fold --config JSON values in as parser defaults (explicit flags win)."""
    path = None
    for i, token in enumerate(argv):
        if token == "--config" and i + 1 < len(argv):
            path = argv[i + 1]
        elif token.startswith("--config="):
            path = token.split("=", 1)[1]
    if path is None:
        return
    try:
        values = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    if not isinstance(values, dict):
        raise UsageError(f"config file {path} must hold a JSON object")
    unknown = set(values) - set(_CONFIGURABLE)
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    try:
        coerced = {key: _CONFIGURABLE[key](value) for key, value in values.items()}
    except (TypeError, ValueError) as exc:
        raise UsageError(f"bad config value: {exc}") from exc
    parser.set_defaults(**coerced)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        _apply_config_file(parser, argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    args = parser.parse_args(argv)
    if getattr(args, "command", None) == "serve":
        if not args.model:
            parser.error("serve requires --model (or PHISHGUARD_MODEL)")
        if args.cors_origin is None:
            args.cors_origin = [os.environ.get("PHISHGUARD_CORS_ORIGIN", "*")]
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ingest.IngestError, modelstore.ModelStoreError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (vectorize.VectorizeError, models.ModelError, evaluate.EvalError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TRAINING


if __name__ == "__main__":
    sys.exit(main())
