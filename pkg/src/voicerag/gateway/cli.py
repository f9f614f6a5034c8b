"""Command-line interface.

Subcommands: ingest, review-sample, review-apply, stats, build-graph,
query, serve, bench. Exit codes: 0 success, 2 usage error (argparse),
1 runtime error.
"""

from __future__ import annotations

import argparse
import sys

from ..corpus.chunkfile import load_documents, read_chunks, write_chunks
from ..corpus.models import ErrorAnnotation, ErrorCategory, ReviewDecision, THEME_DISPLAY_NAMES, Theme
from ..corpus.review import ReviewRecord, apply_review, reopen_for_redraft, sample_for_review
from ..corpus.segmentation import DEFAULT_MAX_CHARS, SegmentPolicy, segment_document
from ..corpus.statistics import corpus_stats
from ..corpus.structuring import structure_chunk
from ..errors import VoiceRagError
from ..fixtures import default_structurer
from ..graph.build import build_graph
from ..graph.retrieval import retrieve_context
from ..graph.storage import load_graph, persist_graph
from .bench import run_bench
from .config import load_config


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="voicerag", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="segment and structure a document directory into a chunk file")
    p.add_argument("docs_dir")
    p.add_argument("out_chunks")
    p.add_argument("--max-chars", type=int, default=DEFAULT_MAX_CHARS)

    p = sub.add_parser("review-sample", help="mark a random sample of draft chunks for review")
    p.add_argument("chunks_file")
    p.add_argument("--rate", type=float, required=True)
    p.add_argument("--seed", type=int, required=True)

    p = sub.add_parser("review-apply", help="apply a stage-1/2 review decision to one chunk")
    p.add_argument("chunks_file")
    p.add_argument("--chunk-id", required=True)
    p.add_argument("--stage", type=int, choices=(1, 2), required=True)
    p.add_argument("--decision", choices=("pass", "flag"), required=True)
    p.add_argument("--reviewer", required=True)
    p.add_argument("--category", choices=[c.value for c in ErrorCategory])
    p.add_argument("--note", default="")
    p.add_argument("--reopen", action="store_true",
                   help="after a stage-2 flag, move the chunk back to Draft")

    p = sub.add_parser("stats", help="per-theme chunk counts")
    p.add_argument("chunks_file")

    p = sub.add_parser("build-graph", help="build and persist the knowledge graph")
    p.add_argument("chunks_file")
    p.add_argument("out_graph")
    p.add_argument("--include-unreviewed", action="store_true",
                   help="admit chunks regardless of review state")

    p = sub.add_parser("query", help="retrieve chunks for a text query")
    p.add_argument("graph_file")
    p.add_argument("text")
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--depth", type=int, choices=(0, 1, 2), default=1)

    p = sub.add_parser("serve", help="run the gateway server")
    p.add_argument("config_file")

    p = sub.add_parser("bench", help="run stub sessions and print the per-module metrics table")
    p.add_argument("config_file")
    p.add_argument("--sessions", type=int, default=10)

    return parser


def cmd_ingest(args) -> int:
    docs = load_documents(args.docs_dir)
    structurer = default_structurer()
    policy = SegmentPolicy(max_chars=args.max_chars)
    chunks = []
    for doc in docs:
        for raw in segment_document(doc, policy):
            chunks.append(structure_chunk(raw, doc, structurer))
    write_chunks(args.out_chunks, chunks)
    print(f"ingested {len(docs)} documents into {len(chunks)} chunks -> {args.out_chunks}")
    return 0


def cmd_review_sample(args) -> int:
    chunks = read_chunks(args.chunks_file)
    picked = sample_for_review(chunks, rate=args.rate, seed=args.seed)
    write_chunks(args.chunks_file, chunks)
    for chunk_id in picked:
        print(chunk_id)
    print(f"sampled {len(picked)} of {len(chunks)} chunks")
    return 0


def cmd_review_apply(args) -> int:
    chunks = read_chunks(args.chunks_file)
    by_id = {c.chunk_id: c for c in chunks}
    chunk = by_id.get(args.chunk_id)
    if chunk is None:
        print(f"no such chunk: {args.chunk_id}", file=sys.stderr)
        return 1
    annotations = []
    if args.category:
        annotations.append(ErrorAnnotation(ErrorCategory(args.category), args.note))
    decision = ReviewDecision.Pass if args.decision == "pass" else ReviewDecision.Flag
    apply_review(chunk, ReviewRecord(args.stage, args.reviewer, decision, annotations))
    if args.reopen:
        reopen_for_redraft(chunk, reviewer_id=args.reviewer)
    write_chunks(args.chunks_file, chunks)
    print(f"{chunk.chunk_id}: {chunk.status.state.value}")
    return 0


def cmd_stats(args) -> int:
    stats = corpus_stats(read_chunks(args.chunks_file))
    width = max(len(name) for name in THEME_DISPLAY_NAMES.values()) + 2
    for theme in Theme:
        print(f"{THEME_DISPLAY_NAMES[theme]:<{width}}{stats.per_theme[theme]:>7}")
    print(f"{'Total':<{width}}{stats.total:>7}")
    return 0


def cmd_build_graph(args) -> int:
    chunks = read_chunks(args.chunks_file)
    graph = build_graph(chunks, require_accepted=not args.include_unreviewed)
    persist_graph(graph, args.out_graph)
    print(
        f"graph: {len(graph.entities)} entities, {len(graph.edges)} edges, "
        f"{len(graph.chunk_index)} chunks -> {args.out_graph}"
    )
    return 0


def cmd_query(args) -> int:
    graph = load_graph(args.graph_file)
    context = retrieve_context(graph, args.text, k=args.k, depth=args.depth)
    print("keywords:", " ".join(context.keywords_used) or "(none)")
    for chunk_id, score in context.chunks:
        chunk = graph.chunk_index[chunk_id]
        print(f"{score:8.1f}  {chunk_id}  《{chunk.basic.book_title}》"
              f"第{chunk.basic.page_number}页  {chunk.basic.original_text[:40]}")
    if not context.chunks:
        print("(no matches)")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app

    config = load_config(args.config_file)
    app = create_app(config)
    uvicorn.run(app, host=config.host, port=config.port, log_level="warning")
    return 0


def cmd_bench(args) -> int:
    config = load_config(args.config_file)
    graph = load_graph(config.graph_path)
    result = run_bench(
        graph,
        sessions=args.sessions,
        pacing=config.backends.pacing,
        config=config.pipeline,
        char_duration=config.backends.char_duration,
    )
    print(result.table())
    return 0


HANDLERS = {
    "ingest": cmd_ingest,
    "review-sample": cmd_review_sample,
    "review-apply": cmd_review_apply,
    "stats": cmd_stats,
    "build-graph": cmd_build_graph,
    "query": cmd_query,
    "serve": cmd_serve,
    "bench": cmd_bench,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return HANDLERS[args.command](args)
    except (VoiceRagError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
