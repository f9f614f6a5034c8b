"""Versioned line-delimited graph persistence.

Layout: one header line carrying the schema version and section counts,
then that many entity lines, edge lines, and chunk lines. All records are
JSON with sorted keys and sorted lists, so a graph always serializes to the
same bytes.
"""

from __future__ import annotations

import json
from pathlib import Path

from ..corpus.chunkfile import chunk_from_record, chunk_to_record
from ..corpus.models import EntityType
from ..errors import CorruptGraphFileError, UnsupportedVersionError
from .model import Entity, KnowledgeGraph, RelationEdge

GRAPH_VERSION = "v1"


def _dump(record: dict) -> str:
    return json.dumps(record, ensure_ascii=False, sort_keys=True, separators=(",", ":"))


def graph_to_lines(graph: KnowledgeGraph) -> list[str]:
    lines = [
        _dump(
            {
                "version": GRAPH_VERSION,
                "counts": {
                    "entities": len(graph.entities),
                    "edges": len(graph.edges),
                    "chunks": len(graph.chunk_index),
                },
            }
        )
    ]
    for eid in sorted(graph.entities):
        e = graph.entities[eid]
        lines.append(
            _dump(
                {
                    "entity_id": e.entity_id,
                    "canonical_name": e.canonical_name,
                    "entity_type": e.entity_type.value,
                    "aliases": sorted(e.aliases),
                    "chunk_refs": sorted(e.chunk_refs),
                }
            )
        )
    for edge in sorted(graph.edges, key=lambda e: e.triple):
        lines.append(
            _dump(
                {
                    "subject_id": edge.subject_id,
                    "predicate": edge.predicate,
                    "object_id": edge.object_id,
                    "chunk_refs": sorted(edge.chunk_refs),
                }
            )
        )
    for cid in sorted(graph.chunk_index):
        lines.append(_dump(chunk_to_record(graph.chunk_index[cid])))
    return lines


def persist_graph(graph: KnowledgeGraph, path: str | Path) -> None:
    Path(path).write_text("\n".join(graph_to_lines(graph)) + "\n", encoding="utf-8")


def load_graph(path: str | Path) -> KnowledgeGraph:
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    return graph_from_lines(lines)


def graph_from_lines(lines: list[str]) -> KnowledgeGraph:
    def parse(line_no: int) -> dict:
        if line_no >= len(lines):
            raise CorruptGraphFileError(line_no + 1, "file truncated")
        try:
            record = json.loads(lines[line_no])
        except json.JSONDecodeError as exc:
            raise CorruptGraphFileError(line_no + 1, str(exc)) from exc
        if not isinstance(record, dict):
            raise CorruptGraphFileError(line_no + 1, "record is not an object")
        return record

    header = parse(0)
    version = header.get("version")
    if version != GRAPH_VERSION:
        raise UnsupportedVersionError(f"graph file version {version!r}, expected {GRAPH_VERSION!r}")
    counts = header.get("counts")
    if not isinstance(counts, dict):
        raise CorruptGraphFileError(1, "header missing counts")
    try:
        n_entities = int(counts["entities"])
        n_edges = int(counts["edges"])
        n_chunks = int(counts["chunks"])
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptGraphFileError(1, f"bad counts: {exc}") from exc

    graph = KnowledgeGraph()
    line_no = 1
    for _ in range(n_entities):
        record = parse(line_no)
        try:
            entity = Entity(
                entity_id=record["entity_id"],
                canonical_name=record["canonical_name"],
                entity_type=EntityType(record["entity_type"]),
                aliases=set(record["aliases"]),
                chunk_refs=set(record["chunk_refs"]),
            )
        except (KeyError, ValueError) as exc:
            raise CorruptGraphFileError(line_no + 1, f"bad entity record: {exc}") from exc
        graph.entities[entity.entity_id] = entity
        line_no += 1
    for _ in range(n_edges):
        record = parse(line_no)
        try:
            edge = RelationEdge(
                subject_id=record["subject_id"],
                predicate=record["predicate"],
                object_id=record["object_id"],
                chunk_refs=set(record["chunk_refs"]),
            )
        except KeyError as exc:
            raise CorruptGraphFileError(line_no + 1, f"bad edge record: {exc}") from exc
        graph.edges.append(edge)
        line_no += 1
    for _ in range(n_chunks):
        record = parse(line_no)
        try:
            chunk = chunk_from_record(record)
        except (KeyError, ValueError, UnsupportedVersionError) as exc:
            raise CorruptGraphFileError(line_no + 1, f"bad chunk record: {exc}") from exc
        graph.chunk_index[chunk.chunk_id] = chunk
        line_no += 1
    if line_no != len([ln for ln in lines if ln.strip()]):
        raise CorruptGraphFileError(line_no + 1, "trailing data after declared sections")

    graph.rebuild_adjacency()
    problems = graph.check_integrity()
    if problems:
        raise CorruptGraphFileError(0, "; ".join(problems[:3]))
    return graph
