"""Command-line interface: ingest, rank, evaluate, models, serve.

rank and evaluate write canonical line-delimited JSON to --output or
stdout; running the same command twice on identical inputs produces
byte-identical output.  Usage errors exit 2, data errors exit 1 with a
one-line diagnostic on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import corpus as corpus_store
from .embeddings import (ModelRegistry, find_model_file, list_models,
                         load_models_dir, load_text_model)
from .errors import SlrankError
from .evaluation import (AnnotatedCorpus, evaluate_models, render_report,
                         render_table)
from .pipeline import PipelineConfig, default_lemma_dictionary
from .service import (ServiceStartupError, load_pipeline_config,
                      load_service_config, serve)
from .similarity import (AGGREGATIONS, MODE_RESEARCH_QUESTIONS,
                         MODE_SEED_ABSTRACT, RankedList,
                         rank_by_research_questions, rank_by_seed_abstract)

MODE_NAMES = {"rq": MODE_RESEARCH_QUESTIONS, "seed": MODE_SEED_ABSTRACT}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="slrank",
        description="Rank published systematic reviews by semantic "
                    "similarity to research questions or a seed abstract.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_ingest = sub.add_parser("ingest", help="validate, curate, and store "
                                             "a corpus of SLR records")
    p_ingest.add_argument("--input", required=True,
                          help="line-delimited JSON records")
    p_ingest.add_argument("--output", required=True,
                          help="corpus store file to write")
    p_ingest.add_argument("--config", help="pipeline config JSON")

    p_rank = sub.add_parser("rank", help="rank a corpus against a query")
    p_rank.add_argument("--mode", choices=("rq", "seed"), required=True)
    p_rank.add_argument("--questions-file",
                        help="one research question per line (rq mode)")
    p_rank.add_argument("--seed-file", help="seed abstract text (seed mode)")
    p_rank.add_argument("--corpus", required=True, help="corpus store file")
    p_rank.add_argument("--model", required=True, help="model name")
    p_rank.add_argument("--models-dir", required=True,
                        help="directory of *.txt/*.vec embedding files")
    p_rank.add_argument("--aggregation", choices=AGGREGATIONS,
                        default="concat")
    p_rank.add_argument("--k", type=int,
                        help="keep only the top k results")
    p_rank.add_argument("--output", help="write here instead of stdout")

    p_eval = sub.add_parser("evaluate",
                            help="compare models against annotations")
    p_eval.add_argument("--corpus", required=True)
    p_eval.add_argument("--annotations", required=True,
                        help="CSV: doc_id,label[,rating]")
    p_eval.add_argument("--models-dir", required=True)
    p_eval.add_argument("--mode", choices=("rq", "seed"), required=True)
    p_eval.add_argument("--questions-file")
    p_eval.add_argument("--seed-file")
    p_eval.add_argument("--k", default="5,10,20",
                        help="comma-separated cutoffs")
    p_eval.add_argument("--aggregation", choices=AGGREGATIONS,
                        default="concat")
    p_eval.add_argument("--output", help="write here instead of stdout")
    p_eval.add_argument("--table", action="store_true",
                        help="print an aligned table instead of JSON lines")

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--config", required=True,
                         help="service config JSON")

    p_models = sub.add_parser("models", help="list models in a directory")
    p_models.add_argument("--models-dir", required=True)

    return parser


def _read_text(path: str, what: str) -> str:
    try:
        with open(path, encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise SlrankError(f"cannot read {what} {path}: {exc}") from exc


def _write_output(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _query_inputs(args, parser_error):
    if args.mode == "rq":
        if not args.questions_file:
            parser_error("--questions-file is required with --mode rq")
        text = _read_text(args.questions_file, "questions file")
        return [line for line in text.splitlines() if line.strip()]
    if not args.seed_file:
        parser_error("--seed-file is required with --mode seed")
    return _read_text(args.seed_file, "seed file")


def render_ranking(ranked: RankedList, k: int | None = None) -> str:
    """Canonical line-delimited JSON rendering of a ranked list."""
    descriptor = ranked.query_descriptor
    header = {
        "format": "slr-ranking",
        "version": 1,
        "mode": descriptor.mode if descriptor else None,
        "model": descriptor.model_name if descriptor else None,
        "query_digest": descriptor.query_digest if descriptor else None,
    }
    if descriptor and descriptor.aggregation is not None:
        header["aggregation"] = descriptor.aggregation
    lines = [json.dumps(header, ensure_ascii=False, separators=(",", ":"))]
    results = ranked.results if k is None else ranked.results[:k]
    for r in results:
        lines.append(json.dumps(
            {"doc_id": r.doc_id, "rank": r.rank, "similarity": r.similarity,
             "distance": r.distance, "coverage": r.coverage},
            ensure_ascii=False, separators=(",", ":")))
    for doc_id, reason in ranked.skipped_docs:
        lines.append(json.dumps(
            {"doc_id": doc_id, "skipped": True, "reason": reason},
            ensure_ascii=False, separators=(",", ":")))
    return "\n".join(lines) + "\n"


def _cmd_ingest(args) -> int:
    config = (load_pipeline_config(args.config) if args.config
              else PipelineConfig())
    corpus = corpus_store.ingest(args.input, config,
                                 default_lemma_dictionary())
    corpus_store.save(corpus, args.output)
    print(f"ingested {len(corpus)} records into {args.output}")
    return 0


def _cmd_rank(args, parser_error) -> int:
    if args.k is not None and args.k < 1:
        parser_error("--k must be >= 1")
    query = _query_inputs(args, parser_error)
    corpus = corpus_store.load(args.corpus)
    model = load_text_model(find_model_file(args.models_dir, args.model),
                            args.model)
    dictionary = default_lemma_dictionary()
    if args.mode == "rq":
        ranked = rank_by_research_questions(
            query, corpus, model, dictionary, corpus.pipeline_config,
            aggregation=args.aggregation)
    else:
        ranked = rank_by_seed_abstract(
            query, corpus, model, dictionary, corpus.pipeline_config)
    _write_output(render_ranking(ranked, args.k), args.output)
    return 0


def _cmd_evaluate(args, parser_error) -> int:
    try:
        k_values = tuple(int(part) for part in args.k.split(",") if part)
    except ValueError:
        parser_error(f"--k must be comma-separated integers, got {args.k!r}")
    if not k_values or any(k < 1 for k in k_values):
        parser_error("--k cutoffs must be >= 1")
    query = _query_inputs(args, parser_error)
    corpus = corpus_store.load(args.corpus)
    labels, ratings = corpus_store.load_annotations(args.annotations)
    try:
        annotated = AnnotatedCorpus(corpus=corpus, labels=labels,
                                    ratings=ratings or None)
    except ValueError as exc:
        raise SlrankError(str(exc)) from exc
    registry = load_models_dir(args.models_dir)
    if len(registry) == 0:
        raise SlrankError(f"no model files in {args.models_dir}")
    report = evaluate_models(annotated, registry, MODE_NAMES[args.mode],
                             query, k_values, aggregation=args.aggregation)
    text = render_table(report) if args.table else render_report(report)
    _write_output(text, args.output)
    return 0


def _cmd_serve(args) -> int:
    serve(load_service_config(args.config))
    return 0


def _cmd_models(args) -> int:
    registry = load_models_dir(args.models_dir)
    for name, dimension, vocab_size in list_models(registry):
        print(f"{name}\t{dimension}\t{vocab_size}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "ingest":
            return _cmd_ingest(args)
        if args.command == "rank":
            return _cmd_rank(args, parser.error)
        if args.command == "evaluate":
            return _cmd_evaluate(args, parser.error)
        if args.command == "serve":
            return _cmd_serve(args)
        if args.command == "models":
            return _cmd_models(args)
        parser.error(f"unknown command {args.command!r}")
    except (SlrankError, ServiceStartupError) as exc:
        print(f"slrank: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"slrank: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
