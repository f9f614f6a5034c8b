"""Line-delimited chunk files and document loading.

Chunk files hold one StructuredChunk per line as a JSON record with a fixed
field order and a "schema": "v1" version field. Documents arrive as one UTF-8
text file plus a sidecar metadata record (single JSON line) named
``<doc>.meta.json`` next to ``<doc>.txt``.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable

from ..errors import UnsupportedVersionError
from .models import (
    BasicInfo,
    EntityMention,
    EntityType,
    ErrorAnnotation,
    ErrorCategory,
    Period,
    RelationMention,
    ReviewEvent,
    ReviewState,
    ReviewStatus,
    SourceDocument,
    StructuredChunk,
    Theme,
)

SCHEMA_VERSION = "v1"


def chunk_to_record(chunk: StructuredChunk) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "chunk_id": chunk.chunk_id,
        "basic": {
            "original_text": chunk.basic.original_text,
            "translation": chunk.basic.translation,
            "summary": chunk.basic.summary,
            "book_title": chunk.basic.book_title,
            "page_number": chunk.basic.page_number,
        },
        "entities": [
            {
                "surface": m.surface,
                "entity_type": m.entity_type.value,
                "span": list(m.span) if m.span else None,
            }
            for m in chunk.entities
        ],
        "relations": [
            {
                "subject_surface": r.subject_surface,
                "predicate": r.predicate,
                "object_surface": r.object_surface,
            }
            for r in chunk.relations
        ],
        "status": {
            "state": chunk.status.state.value,
            "annotations": [
                {
                    "category": a.category.value,
                    "note": a.note,
                    "span": list(a.span) if a.span else None,
                }
                for a in chunk.status.annotations
            ],
            "history": [
                [e.state.value, e.reviewer_id, e.timestamp] for e in chunk.status.history
            ],
        },
        "theme": chunk.theme.value if chunk.theme else None,
        "period": chunk.period.value if chunk.period else None,
    }


def chunk_from_record(record: dict) -> StructuredChunk:
    version = record.get("schema")
    if version != SCHEMA_VERSION:
        raise UnsupportedVersionError(f"chunk record schema {version!r}, expected {SCHEMA_VERSION!r}")
    basic = record["basic"]
    status = record.get("status") or {}
    return StructuredChunk(
        chunk_id=record["chunk_id"],
        basic=BasicInfo(
            original_text=basic["original_text"],
            translation=basic["translation"],
            summary=basic["summary"],
            book_title=basic["book_title"],
            page_number=basic["page_number"],
        ),
        entities=[
            EntityMention(
                surface=m["surface"],
                entity_type=EntityType(m["entity_type"]),
                span=tuple(m["span"]) if m.get("span") else None,
            )
            for m in record.get("entities", [])
        ],
        relations=[
            RelationMention(r["subject_surface"], r["predicate"], r["object_surface"])
            for r in record.get("relations", [])
        ],
        status=ReviewStatus(
            state=ReviewState(status.get("state", "Draft")),
            annotations=[
                ErrorAnnotation(
                    category=ErrorCategory(a["category"]),
                    note=a.get("note", ""),
                    span=tuple(a["span"]) if a.get("span") else None,
                )
                for a in status.get("annotations", [])
            ],
            history=[
                ReviewEvent(ReviewState(s), reviewer, ts)
                for s, reviewer, ts in status.get("history", [])
            ],
        ),
        theme=Theme(record["theme"]) if record.get("theme") else None,
        period=Period(record["period"]) if record.get("period") else None,
    )


def dump_chunk_line(chunk: StructuredChunk) -> str:
    return json.dumps(chunk_to_record(chunk), ensure_ascii=False, separators=(",", ":"))


def write_chunks(path: str | Path, chunks: Iterable[StructuredChunk]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for chunk in chunks:
            fh.write(dump_chunk_line(chunk))
            fh.write("\n")


def read_chunks(path: str | Path) -> list[StructuredChunk]:
    chunks: list[StructuredChunk] = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                chunks.append(chunk_from_record(json.loads(line)))
    return chunks


def load_documents(docs_dir: str | Path) -> list[SourceDocument]:
    """Load every ``*.txt`` + ``*.meta.json`` pair under a directory."""
    docs: list[SourceDocument] = []
    for txt_path in sorted(Path(docs_dir).glob("*.txt")):
        meta_path = txt_path.parent / (txt_path.stem + ".meta.json")
        if not meta_path.exists():
            raise FileNotFoundError(f"missing sidecar metadata for {txt_path.name}")
        body = txt_path.read_text(encoding="utf-8")
        meta = json.loads(meta_path.read_text(encoding="utf-8").strip())
        docs.append(
            SourceDocument.create(
                title=meta["title"],
                period=Period(meta["period"]),
                theme=Theme(meta["theme"]),
                body=body,
                page_breaks=meta.get("page_breaks", []),
            )
        )
    return docs


def write_document(docs_dir: str | Path, name: str, doc_body: str, meta: dict) -> None:
    """Write one document file plus its sidecar metadata line."""
    docs_dir = Path(docs_dir)
    docs_dir.mkdir(parents=True, exist_ok=True)
    (docs_dir / f"{name}.txt").write_text(doc_body, encoding="utf-8")
    (docs_dir / f"{name}.meta.json").write_text(
        json.dumps(meta, ensure_ascii=False) + "\n", encoding="utf-8"
    )
