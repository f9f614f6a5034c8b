"""Turning unstructured chunks into validated StructuredChunks.

The Structurer protocol abstracts over the deterministic rule-based stub
(dictionary entity matcher + subject-verb-object relation rule) and a remote
service. `structure_chunk` owns assembly and schema validation either way.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Protocol

from ..errors import (
    BackendUnavailableError,
    SchemaViolationError,
    StageTimeoutError,
    StageUnreachableError,
)
from .models import (
    BasicInfo,
    EntityMention,
    EntityType,
    RelationMention,
    ReviewStatus,
    SourceDocument,
    StructuredChunk,
    UnstructuredChunk,
    schema_violations,
)


@dataclass
class StructuredDraft:
    """Raw structurer output before assembly and validation."""

    translation: str
    summary: str
    entities: list[EntityMention] = field(default_factory=list)
    relations: list[RelationMention] = field(default_factory=list)


class Structurer(Protocol):
    def structure(self, text: str) -> StructuredDraft: ...


def structure_chunk(
    chunk: UnstructuredChunk, doc: SourceDocument, structurer: Structurer
) -> StructuredChunk:
    """Run the structurer on one chunk and validate the result.

    Basic info (original text, book title, page number) comes from the chunk
    and its document, never from the structurer. The returned chunk starts in
    Draft state.
    """
    if not chunk.text:
        raise SchemaViolationError(["original_text"])
    try:
        draft = structurer.structure(chunk.text)
    except (StageUnreachableError, StageTimeoutError) as exc:
        raise BackendUnavailableError(str(exc)) from exc
    structured = StructuredChunk(
        chunk_id=chunk.chunk_id,
        basic=BasicInfo(
            original_text=chunk.text,
            translation=draft.translation,
            summary=draft.summary,
            book_title=doc.title,
            page_number=chunk.page_number,
        ),
        entities=list(draft.entities),
        relations=list(draft.relations),
        status=ReviewStatus(),
        theme=doc.theme,
        period=doc.period,
    )
    bad = schema_violations(structured)
    if bad:
        raise SchemaViolationError(bad)
    return structured


# Sentence terminals used by the stub's per-sentence relation rule.
_SENTENCE_TERMINALS = frozenset("。！？…!?.")


class StubStructurer:
    """Deterministic pattern extractor standing in for an LLM structurer.

    Entities: maximal (longest-first) dictionary matches over a fixed
    gazetteer of surface → type. Relations: within one sentence, every
    consecutive pair of entity matches separated exactly by a known predicate
    yields (subject, predicate, object). Translation and summary are template
    text derived from the input.
    """

    def __init__(
        self,
        gazetteer: dict[str, EntityType],
        predicates: set[str] | frozenset[str],
    ):
        self.gazetteer = dict(gazetteer)
        self.predicates = frozenset(predicates)
        # Longest-first candidate surfaces per leading character.
        self._by_head: dict[str, list[str]] = {}
        for surface in sorted(self.gazetteer, key=len, reverse=True):
            if surface:
                self._by_head.setdefault(surface[0], []).append(surface)

    def structure(self, text: str) -> StructuredDraft:
        entities: list[EntityMention] = []
        relations: list[RelationMention] = []
        for s_start, s_text in _sentences(text):
            matches = self._match_entities(s_text)
            for rel_start, surface in matches:
                entities.append(
                    EntityMention(
                        surface=surface,
                        entity_type=self.gazetteer[surface],
                        span=(s_start + rel_start, s_start + rel_start + len(surface)),
                    )
                )
            for (a_start, a_surface), (b_start, b_surface) in zip(matches, matches[1:]):
                between = s_text[a_start + len(a_surface) : b_start]
                if between in self.predicates:
                    relations.append(RelationMention(a_surface, between, b_surface))
        translation = "今译：" + text
        summary = text[: max(1, len(text) // 3)]
        return StructuredDraft(translation, summary, entities, relations)

    def _match_entities(self, sentence: str) -> list[tuple[int, str]]:
        matches: list[tuple[int, str]] = []
        i = 0
        while i < len(sentence):
            hit = None
            for surface in self._by_head.get(sentence[i], ()):
                if sentence.startswith(surface, i):
                    hit = surface
                    break
            if hit is not None:
                matches.append((i, hit))
                i += len(hit)
            else:
                i += 1
        return matches


def _sentences(text: str) -> list[tuple[int, str]]:
    """(start offset, text) pairs, splitting after each terminal mark."""
    out: list[tuple[int, str]] = []
    start = 0
    for i, ch in enumerate(text):
        if ch in _SENTENCE_TERMINALS:
            out.append((start, text[start : i + 1]))
            start = i + 1
    if start < len(text):
        out.append((start, text[start:]))
    return out
