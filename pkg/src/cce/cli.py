"""Command-line surface tying the pipeline together.

Subcommands: synthesize, train, query, serve, eval, hypersearch, table1.
Exit codes: 0 success, 1 usage error, 2 data/format error, 3 internal
error.  Machine-readable outputs (corpus files, model files, JSON reports)
are byte-for-byte reproducible for a fixed seed.
"""

from __future__ import annotations

import argparse
import json
import sys

from cce import embeddings as embeddings_mod
from cce import synthesizer
from cce.corpus import load_corpus, merge_corpora, save_corpus
from cce.engine import QueryEngine
from cce.errors import CceError
from cce.evaluation import micro_f1
from cce.experiments import HyperSpace, grid_search, table1_experiment
from cce.matcher import MatcherConfig
from cce.service import serve
from cce.synthesizer import SynthesisConfig, load_glossary, load_templates
from cce.tagger import TrainConfig, load_model, predict_corpus, save_model, train


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _write_json(path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(payload, handle, sort_keys=True, indent=2)
        handle.write("\n")


def _load_provider(path, oov: str) -> embeddings_mod.EmbeddingProvider:
    return embeddings_mod.load_vectors_file(path, oov_mode=embeddings_mod.OovMode(oov))


def _load_corpora(paths, seed: int, label: str):
    parts = [load_corpus(path) for path in paths]
    if len(parts) == 1:
        return parts[0]
    return merge_corpora(parts, seed=seed, name=label)


def _matcher_config(args) -> MatcherConfig:
    return MatcherConfig(s_c=args.s_c, min_score=args.min_score, top_k=args.top_k)


def _add_matcher_flags(parser) -> None:
    parser.add_argument("--s-c", dest="s_c", type=float, default=0.6,
                        help="similarity cutoff inside the coverage score (default 0.6)")
    parser.add_argument("--min-score", type=float, default=0.0,
                        help="drop matches scoring at or below this (default 0)")
    parser.add_argument("--top-k", type=int, default=10,
                        help="max matches per entity (default 10)")


def _add_train_flags(parser) -> None:
    parser.add_argument("--epochs", type=int, default=10)
    parser.add_argument("--hidden-size", type=int, default=256)
    parser.add_argument("--lr", type=float, default=0.05)
    parser.add_argument("--batch", type=int, default=32)
    parser.add_argument("--dropout", type=float, default=0.0)
    parser.add_argument("--seed", type=int, default=0)


def _train_config(args) -> TrainConfig:
    return TrainConfig(
        hidden_size=args.hidden_size,
        learning_rate=args.lr,
        mini_batch_size=args.batch,
        epochs=args.epochs,
        dropout=args.dropout,
        seed=args.seed,
    )


def cmd_synthesize(args) -> int:
    glossary = load_glossary(args.glossary)
    config = SynthesisConfig(
        min_terms=args.min_terms, max_terms=args.max_terms, count=args.count, seed=args.seed
    )
    if args.mode == "query":
        corpus = synthesizer.synthesize_query_corpus(glossary, config)
    else:
        templates = (
            load_templates(args.templates)
            if args.templates
            else synthesizer.default_note_templates()
        )
        corpus = synthesizer.synthesize_note_corpus(glossary, templates, config)
    save_corpus(corpus, args.out)
    print(f"wrote {len(corpus)} sentences to {args.out}")
    return 0


def cmd_train(args) -> int:
    provider = _load_provider(args.vectors, args.oov)
    train_corpus = _load_corpora(args.train, seed=args.seed, label="train")
    dev_corpus = _load_corpora(args.dev, seed=args.seed, label="dev")
    params, log = train(train_corpus, dev_corpus, provider, _train_config(args))
    for record in log:
        print(f"epoch {record.epoch}: train_nll={record.train_nll:.6f} dev_f1={record.dev_f1:.4f}")
    save_model(params, args.out)
    print(f"wrote model to {args.out}")
    return 0


def _engine(args) -> QueryEngine:
    params = load_model(args.model)
    provider = _load_provider(args.vectors, args.oov)
    if provider.dimension != params.dimension:
        raise CceError(
            f"vector dimension {provider.dimension} does not match "
            f"model dimension {params.dimension}"
        )
    glossary = load_glossary(args.glossary)
    return QueryEngine(params, provider, glossary, _matcher_config(args))


def _print_response(response, as_json: bool) -> None:
    if as_json:
        print(json.dumps(response.to_dict(), sort_keys=True))
    else:
        print(response.to_text())


def cmd_query(args) -> int:
    engine = _engine(args)
    if args.query:
        _print_response(engine.respond(" ".join(args.query)), args.json)
        return 0
    for line in sys.stdin:
        text = line.strip()
        if not text:
            print("warning: skipping empty query line", file=sys.stderr)
            continue
        _print_response(engine.respond(text), args.json)
    return 0


def cmd_serve(args) -> int:
    engine = _engine(args)
    print(f"serving on {args.host}:{args.port}")
    serve(engine, host=args.host, port=args.port)
    return 0


def cmd_eval(args) -> int:
    params = load_model(args.model)
    provider = _load_provider(args.vectors, args.oov)
    gold = load_corpus(args.corpus)
    predictions = predict_corpus(params, provider, gold)
    if args.pred_out:
        save_corpus(predictions, args.pred_out)
    report = micro_f1(gold, predictions, level=args.level)
    print(
        f"tp={report.true_positives} fp={report.false_positives} fn={report.false_negatives} "
        f"precision={report.precision:.4f} recall={report.recall:.4f} f1={report.micro_f1:.4f}"
    )
    if args.json_out:
        _write_json(
            args.json_out,
            {
                "version": "1",
                "level": args.level,
                "tp": report.true_positives,
                "fp": report.false_positives,
                "fn": report.false_negatives,
                "precision": report.precision,
                "recall": report.recall,
                "micro_f1": report.micro_f1,
            },
        )
    return 0


def _csv(text: str, converter):
    return tuple(converter(part) for part in text.split(",") if part)


def cmd_hypersearch(args) -> int:
    train_corpus = _load_corpora(args.train, seed=args.seed, label="train")
    dev_corpus = _load_corpora(args.dev, seed=args.seed, label="dev")
    providers = {path: _load_provider(path, args.oov) for path in args.vectors}
    space = HyperSpace(
        hidden_sizes=_csv(args.hidden_sizes, int),
        learning_rates=_csv(args.learning_rates, float),
        mini_batch_sizes=_csv(args.batch_sizes, int),
        embeddings=tuple(providers),
    )
    best, table = grid_search(
        space,
        train_corpus,
        dev_corpus,
        provider_factory=providers.__getitem__,
        evals_per_config=args.evals,
        epochs=args.epochs,
        seed=args.seed,
    )
    for row in table:
        status = row.error if row.error else f"mean_dev_f1={row.mean_dev_f1:.4f}"
        print(
            f"h={row.hidden_size} lr={row.learning_rate} batch={row.mini_batch_size} "
            f"emb={row.embedding}: {status}"
        )
    print(
        f"best: h={best.hidden_size} lr={best.learning_rate} batch={best.mini_batch_size} "
        f"emb={best.embedding} mean_dev_f1={best.mean_dev_f1:.4f}"
    )
    if args.out:
        _write_json(
            args.out,
            {"version": "1", "best": best.to_dict(), "rows": [r.to_dict() for r in table]},
        )
    return 0


def cmd_table1(args) -> int:
    note_corpus = load_corpus(args.note_corpus)
    query_corpus = load_corpus(args.query_corpus)
    if args.vectors:
        provider = _load_provider(args.vectors, args.oov)
    else:
        words = sorted(
            {text for c in (note_corpus, query_corpus) for s in c for text in s.texts}
        )
        provider = embeddings_mod.random_unit_provider(
            words, dimension=args.random_dim, seed=args.random_seed
        )
    seeds = _csv(args.seeds, int)
    report = table1_experiment(note_corpus, query_corpus, provider, _train_config(args), seeds)
    print("seed  hybrid/query  hybrid/note  note-only/query  note-only/note")
    for row in report.rows:
        print(
            f"{row.seed:<5d} {row.hybrid_on_query:<13.4f} {row.hybrid_on_note:<12.4f} "
            f"{row.note_only_on_query:<16.4f} {row.note_only_on_note:.4f}"
        )
    print(
        f"mean  {report.mean_hybrid_on_query:<13.4f} {report.mean_hybrid_on_note:<12.4f} "
        f"{report.mean_note_only_on_query:<16.4f} {report.mean_note_only_on_note:.4f}"
    )
    if args.out:
        _write_json(args.out, {"version": "1", **report.to_dict()})
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="cce", description="Clinical concept extraction from user queries.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("synthesize", help="generate a tagged corpus from a glossary")
    p.add_argument("--glossary", required=True)
    p.add_argument("--mode", choices=("query", "note"), default="query")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--min-terms", type=int, default=1)
    p.add_argument("--max-terms", type=int, default=5)
    p.add_argument("--templates", help="note templates file (default: bundled)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("train", help="train the tagger")
    p.add_argument("--train", action="append", required=True,
                   help="training corpus file; repeat to merge sources into a hybrid set")
    p.add_argument("--dev", action="append", required=True,
                   help="dev corpus file; repeatable like --train")
    p.add_argument("--vectors", required=True)
    p.add_argument("--oov", choices=("hashed_ngram", "zero"), default="hashed_ngram")
    _add_train_flags(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("query", help="tag a query and rank glossary matches per entity")
    p.add_argument("--model", required=True)
    p.add_argument("--vectors", required=True)
    p.add_argument("--glossary", required=True)
    p.add_argument("--oov", choices=("hashed_ngram", "zero"), default="hashed_ngram")
    _add_matcher_flags(p)
    p.add_argument("--json", action="store_true", help="emit machine-readable JSON")
    p.add_argument("query", nargs="*", help="query text; omit to read one query per stdin line")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("serve", help="run the HTTP query service")
    p.add_argument("--model", required=True)
    p.add_argument("--vectors", required=True)
    p.add_argument("--glossary", required=True)
    p.add_argument("--oov", choices=("hashed_ngram", "zero"), default="hashed_ngram")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8756)
    _add_matcher_flags(p)
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("eval", help="evaluate a model against a gold corpus")
    p.add_argument("--model", required=True)
    p.add_argument("--vectors", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--oov", choices=("hashed_ngram", "zero"), default="hashed_ngram")
    p.add_argument("--level", choices=("span", "token"), default="span")
    p.add_argument("--pred-out", help="also write the predictions as a corpus file")
    p.add_argument("--json-out", help="write the report as JSON")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("hypersearch", help="exhaustive hyperparameter grid search")
    p.add_argument("--train", action="append", required=True)
    p.add_argument("--dev", action="append", required=True)
    p.add_argument("--vectors", action="append", required=True,
                   help="vector file; repeat for multiple embedding variants")
    p.add_argument("--oov", choices=("hashed_ngram", "zero"), default="hashed_ngram")
    p.add_argument("--hidden-sizes", default="128,256")
    p.add_argument("--learning-rates", default="0.05,0.1")
    p.add_argument("--batch-sizes", default="32,64,128")
    p.add_argument("--evals", type=int, default=3)
    p.add_argument("--epochs", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write the full report as JSON")
    p.set_defaults(func=cmd_hypersearch)

    p = sub.add_parser("table1", help="hybrid vs note-only training comparison")
    p.add_argument("--note-corpus", required=True)
    p.add_argument("--query-corpus", required=True)
    p.add_argument("--vectors")
    p.add_argument("--oov", choices=("hashed_ngram", "zero"), default="hashed_ngram")
    p.add_argument("--random-dim", type=int, default=16,
                   help="without --vectors: dimension of seeded random unit vectors")
    p.add_argument("--random-seed", type=int, default=0)
    p.add_argument("--seeds", default="0,1,2", help="comma-separated experiment seeds")
    _add_train_flags(p)
    p.add_argument("--out", help="write the report as JSON")
    p.set_defaults(func=cmd_table1)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (CceError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except KeyboardInterrupt:
        return 130
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
