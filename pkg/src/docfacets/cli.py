"""Command-line pipeline driver.

Each subcommand persists its outputs in the store directory so later stages
(and the HTTP service) can pick them up:

    docfacets ingest ROOT        build the document store
    docfacets extract            keyword extraction per document
    docfacets topics             fit LDA, assign topics above the threshold
    docfacets train MANIFEST     fit technology or report-type classifiers
    docfacets mentions SPEC      scan documents for mention expressions
    docfacets index              assemble the facet index snapshot
    docfacets serve              start the HTTP/JSON service
    docfacets query 'EXPR'       one-shot search against the snapshot

Query expressions mirror the HTTP parameters: bare words are text terms and
``f.<facet>=value``, ``from=``, ``to=``, ``page=``, ``page_size=`` pairs map
one-to-one, e.g. ``docfacets query 'mining f.folder=b from=2013-01-01'``.

Every subcommand accepts ``--store DIR`` (workspace, default facetstore/)
and ``--config FILE`` (plain-text key-value pipeline defaults; explicit
flags override file values).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__, kera, mentions, supervised, textproc, topics
from .ingest import IngestConfig, IngestReport, walk_and_extract
from .pipeline import (
    REPORT_TYPE_TAGS_FILE,
    TECHNOLOGY_TAGS_FILE,
    TOPIC_ASSIGNMENTS_FILE,
    TOPIC_MODEL_FILE,
    TOPIC_TAGS_FILE,
    PipelineConfig,
    StageError,
    Store,
)
from .service import SearchService, canonical_json, serve

DEFAULT_STORE = "facetstore"


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--store", default=DEFAULT_STORE, help="pipeline workspace directory"
    )
    common.add_argument(
        "--config", help="key-value pipeline config file; flags override it"
    )

    parser = argparse.ArgumentParser(prog="docfacets", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", parents=[common], help="walk a tree into the store")
    p.add_argument("root", nargs="?", help="directory to ingest")
    p.add_argument("--include-hidden", action="store_true")
    p.add_argument("--extensions", help="comma-separated extension list")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("extract", parents=[common], help="extract keywords per doc")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--method", choices=[kera.LLR, kera.PMI], default=None)
    p.add_argument("--min-count", type=int, default=None)
    p.add_argument("--prune", action="store_true",
                   help="keep only upper-case proper-noun unigrams")
    p.add_argument("--drop-embedded-unigrams", action="store_true")
    p.add_argument("--late-unigram-cutoff", type=float, default=None)
    p.add_argument("--alpha-frequency", action="store_true",
                   help="always use normalized frequency for alpha")

    p = sub.add_parser("topics", parents=[common], help="fit LDA topic clusters")
    p.add_argument("--k", type=int, default=None, help="topic count (default: heuristic)")
    p.add_argument("--iterations", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--threshold", type=float, default=None)
    p.add_argument("--tags", type=int, default=10, help="topic tags per topic")

    p = sub.add_parser("train", parents=[common], help="fit classifiers from a manifest")
    p.add_argument("manifest", nargs="?", help="label<TAB>doc_id lines")
    p.add_argument("--kind", choices=["technology", "report_type"], default="technology")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--epochs", type=int, default=60)
    p.add_argument("--lam", type=float, default=1e-4)

    p = sub.add_parser("mentions", parents=[common], help="scan docs for mentions")
    p.add_argument("spec", nargs="?", help="mention spec file")

    sub.add_parser("index", parents=[common], help="assemble the facet index")

    p = sub.add_parser("serve", parents=[common], help="start the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=None)

    p = sub.add_parser("query", parents=[common], help="one-shot search")
    p.add_argument("expression", help="terms and f.facet=value pairs")
    return parser


def _load_config(args) -> PipelineConfig:
    if getattr(args, "config", None):
        return PipelineConfig.from_file(args.config)
    return PipelineConfig()


def _cmd_ingest(args) -> int:
    pipeline_config = _load_config(args)
    root = args.root or pipeline_config.root
    if not root:
        print("ingest: a root directory (or --config with root=) is required",
              file=sys.stderr)
        return 2
    include_hidden = args.include_hidden or pipeline_config.include_hidden
    if args.extensions:
        exts = tuple(e.strip().lower() for e in args.extensions.split(",") if e.strip())
    else:
        exts = pipeline_config.extensions
    config = IngestConfig(root=root, include_hidden=include_hidden, extensions=exts)

    store = Store(args.store)
    report = IngestReport()
    docs = list(walk_and_extract(root, config, report=report, workers=args.workers))
    n = store.save_documents(docs)
    store.save_ingest_report(report)
    print(f"ingested {n} documents ({len(report.skipped)} skipped, "
          f"{len(report.warnings)} warnings) into {store.root}")
    return 0


def _cmd_extract(args) -> int:
    config = _load_config(args)
    store = Store(args.store)
    docs = store.load_documents()
    k = args.k if args.k is not None else config.kera_k
    options = kera.KeraOptions(
        method=args.method if args.method is not None else config.kera_method,
        min_count=args.min_count if args.min_count is not None else config.kera_min_count,
        prune_upper_case=args.prune or config.kera_prune,
        drop_embedded_unigrams=args.drop_embedded_unigrams,
        late_unigram_cutoff=args.late_unigram_cutoff,
        alpha_always_frequency=args.alpha_frequency,
    )
    keywords = {}
    for doc_id, doc in docs.items():
        ranked = kera.extract_keywords(doc, k=k, options=options)
        keywords[doc_id] = ranked
        for rank, cand in enumerate(ranked, start=1):
            print(f"{doc_id}\t{rank}\t{cand.text}\t{cand.score:.6f}")
    store.save_keywords(keywords)
    return 0


def _cmd_topics(args) -> int:
    config = _load_config(args)
    store = Store(args.store)
    docs = store.load_documents()
    tagged = {doc_id: textproc.analyze(doc.text) for doc_id, doc in docs.items()}
    corpus = topics.prepare_corpus(tagged)
    if not corpus:
        print("topics: no usable tokens in the corpus", file=sys.stderr)
        return 1
    k = args.k if args.k is not None else config.topics_k
    if k is None:
        k = topics.choose_k(len(corpus))
    iterations = args.iterations if args.iterations is not None else config.topics_iterations
    seed = args.seed if args.seed is not None else config.topics_seed
    threshold = args.threshold if args.threshold is not None else config.topics_threshold
    state = topics.fit_lda(corpus, k=k, iterations=iterations, seed=seed)
    assignment = topics.assign_topics(state, threshold=threshold)
    order = topics.rank_topics(state, assignment)

    topics.save_model(state, store.path(TOPIC_MODEL_FILE))
    store.save_tag_table(
        TOPIC_ASSIGNMENTS_FILE,
        {d: {str(t) for t in ts} for d, ts in assignment.items() if ts},
    )
    n_tags = min(args.tags, len(state.vocab))
    tag_lines = []
    for t in order:
        words = " ".join(topics.topic_tags(state, t, n=n_tags))
        tag_lines.append(f"{t}\t{words}")
        print(f"topic {t}: {words}")
    store.path(TOPIC_TAGS_FILE).write_text("\n".join(tag_lines) + "\n", encoding="utf-8")
    assigned = sum(1 for ts in assignment.values() if ts)
    print(f"fitted {k} topics over {len(corpus)} documents; {assigned} assigned")
    return 0


def _cmd_train(args) -> int:
    config = _load_config(args)
    manifest_path = args.manifest or config.train_manifest
    if not manifest_path:
        print("train: a manifest file (or --config with train.manifest=) is required",
              file=sys.stderr)
        return 2
    store = Store(args.store)
    docs = store.load_documents()
    manifest = Store.load_manifest(manifest_path)
    unknown = {d for ids in manifest.values() for d in ids} - set(docs)
    if unknown:
        print(f"train: manifest references unknown documents: {sorted(unknown)[:3]}",
              file=sys.stderr)
        return 1
    presence = {doc_id: supervised.document_terms(doc.text) for doc_id, doc in docs.items()}
    vocab = supervised.Vocabulary.from_presence(presence)
    models_dir = store.models_dir(args.kind)
    models_dir.mkdir(parents=True, exist_ok=True)
    config = supervised.ActiveLearningConfig(epochs=args.epochs, lam=args.lam)

    if args.kind == "technology":
        models = []
        for label in sorted(manifest):
            pool = set(docs) - manifest[label]
            model = supervised.train_with_active_learning(
                label, manifest[label], pool, presence, vocab, seed=args.seed,
                config=config,
            )
            supervised.save_model(model, models_dir / f"{label}.model")
            models.append(model)
            print(f"trained {label}: train_accuracy={model.train_accuracy:.3f}")
        tags = {
            doc_id: {supervised.predict_tag(models, presence[doc_id])}
            for doc_id in docs
        }
        store.save_tag_table(TECHNOLOGY_TAGS_FILE, tags)
    else:
        missing = [c for c in supervised.REPORT_TYPES if c not in manifest]
        if missing:
            print(f"train: report_type manifest must label all of "
                  f"{supervised.REPORT_TYPES}; missing {missing}", file=sys.stderr)
            return 1
        models = []
        for label in supervised.REPORT_TYPES:
            rest = {d for other, ids in manifest.items() if other != label for d in ids}
            balanced = supervised.balance_training_set(manifest[label], rest, seed=args.seed)
            model = supervised.train_linear_svm(
                balanced, presence, vocab, label,
                epochs=args.epochs, lam=args.lam, seed=args.seed,
            )
            supervised.save_model(model, models_dir / f"{label}.model")
            models.append(model)
            print(f"trained {label}: train_accuracy={model.train_accuracy:.3f}")
        tags = {
            doc_id: {supervised.classify_report_type(models, presence[doc_id])}
            for doc_id in docs
        }
        store.save_tag_table(REPORT_TYPE_TAGS_FILE, tags)
    return 0


def _cmd_mentions(args) -> int:
    config = _load_config(args)
    spec_path = args.spec or config.mention_spec
    if not spec_path:
        print("mentions: a spec file (or --config with mentions.spec=) is required",
              file=sys.stderr)
        return 2
    store = Store(args.store)
    docs = store.load_documents()
    spec = mentions.parse_mention_spec(spec_path)
    hits = mentions.scan_many(docs.values(), spec)
    store.save_mention_hits(hits)
    for doc_id in sorted(hits):
        for category in sorted(hits[doc_id]):
            print(f"{doc_id}\t{category}\t{hits[doc_id][category]}")
    print(f"tagged {len(hits)} of {len(docs)} documents "
          f"across {len(spec.categories)} categories")
    return 0


def _cmd_index(args) -> int:
    store = Store(args.store)
    index = store.build_index()
    store.save_index(index)
    print(f"indexed {len(index)} documents into {store.path('index.json')}")
    return 0


def _cmd_serve(args) -> int:
    config = _load_config(args)
    port = args.port if args.port is not None else config.port
    store = Store(args.store)
    index = store.load_index()
    print(f"serving {len(index)} documents on http://{args.host}:{port}")
    serve(index, host=args.host, port=port, store=store)
    return 0


def parse_expression(expression: str) -> dict[str, list[str]]:
    """CLI query expression -> the /search parameter mapping."""
    params: dict[str, list[str]] = {}
    directives = ("f.", "from=", "to=", "page=", "page_size=")
    for token in expression.split():
        if token.startswith(directives) and "=" in token:
            key, value = token.split("=", 1)
            params.setdefault(key, []).append(value)
        else:
            params.setdefault("q", []).append(token)
    return params


def _cmd_query(args) -> int:
    store = Store(args.store)
    index = store.load_index()
    service = SearchService(index, store)
    try:
        payload = service.search(parse_expression(args.expression))
    except ValueError as exc:
        print(f"query: {exc}", file=sys.stderr)
        return 1
    print(canonical_json(payload))
    return 0


_COMMANDS = {
    "ingest": _cmd_ingest,
    "extract": _cmd_extract,
    "topics": _cmd_topics,
    "train": _cmd_train,
    "mentions": _cmd_mentions,
    "index": _cmd_index,
    "serve": _cmd_serve,
    "query": _cmd_query,
}


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except StageError as exc:
        print(f"{args.command}: {exc}", file=sys.stderr)
        return 1
    except (FileNotFoundError, ValueError) as exc:
        print(f"{args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
