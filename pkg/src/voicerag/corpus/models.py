"""Domain types for the corpus ingestion pipeline.

A SourceDocument is segmented into UnstructuredChunks, each of which a
structurer turns into a StructuredChunk (original text + translation +
summary, entity mentions, relation mentions) that then walks the two-stage
review state machine.
"""

from __future__ import annotations

import hashlib
import time
from bisect import bisect_right
from dataclasses import dataclass, field
from enum import Enum

from ..errors import EmptyDocumentError, InvalidTransitionError, SchemaViolationError


class Period(Enum):
    PreQin = "PreQin"
    Han = "Han"
    WeiJinNorthSouth = "WeiJinNorthSouth"
    TangSong = "TangSong"
    MingQing = "MingQing"
    Contemporary = "Contemporary"


class Theme(Enum):
    RiverGovernance = "RiverGovernance"
    TechnologyEngineering = "TechnologyEngineering"
    NaturalKnowledge = "NaturalKnowledge"
    SocioEconomic = "SocioEconomic"
    CulturalHeritage = "CulturalHeritage"
    HistoricalNarratives = "HistoricalNarratives"
    DisastersImpacts = "DisastersImpacts"
    Interdisciplinary = "Interdisciplinary"


THEME_DISPLAY_NAMES = {
    Theme.RiverGovernance: "River governance",
    Theme.TechnologyEngineering: "Technology and engineering",
    Theme.NaturalKnowledge: "Natural knowledge",
    Theme.SocioEconomic: "Socio-economic aspects",
    Theme.CulturalHeritage: "Cultural heritage",
    Theme.HistoricalNarratives: "Historical narratives",
    Theme.DisastersImpacts: "Disasters and their impacts",
    Theme.Interdisciplinary: "Interdisciplinary topics",
}


class EntityType(Enum):
    Person = "Person"
    Place = "Place"
    River = "River"
    Dynasty = "Dynasty"
    Work = "Work"
    Institution = "Institution"
    Event = "Event"
    Term = "Term"


class ReviewState(Enum):
    Draft = "Draft"
    Sampled = "Sampled"
    Stage1Annotated = "Stage1Annotated"
    Stage2Verified = "Stage2Verified"
    Accepted = "Accepted"
    Returned = "Returned"


class ErrorCategory(Enum):
    IncorrectTranslation = "IncorrectTranslation"
    Overgeneralization = "Overgeneralization"
    ExcessiveSupplementation = "ExcessiveSupplementation"


class ReviewDecision(Enum):
    Pass = "Pass"
    Flag = "Flag"


def _short_hash(*parts: str) -> str:
    digest = hashlib.sha256("\x1f".join(parts).encode("utf-8")).hexdigest()
    return digest[:16]


@dataclass
class SourceDocument:
    doc_id: str
    title: str
    period: Period
    theme: Theme
    body: str
    page_breaks: list[int] = field(default_factory=list)

    @classmethod
    def create(
        cls,
        title: str,
        period: Period,
        theme: Theme,
        body: str,
        page_breaks: list[int] | None = None,
    ) -> "SourceDocument":
        """Build a document with a content-hash id (idempotent ingestion)."""
        doc_id = "d" + _short_hash(title, period.value, theme.value, body)
        doc = cls(doc_id, title, period, theme, body, list(page_breaks or []))
        doc.validate()
        return doc

    def validate(self) -> None:
        if not self.body:
            raise EmptyDocumentError(f"document {self.doc_id!r} has an empty body")
        prev = 0
        for off in self.page_breaks:
            if off <= prev or off > len(self.body):
                raise ValueError(
                    f"page_breaks must be strictly increasing offsets within the "
                    f"body; got {self.page_breaks}"
                )
            prev = off

    def page_number(self, offset: int) -> int:
        """1-based page containing the given character offset."""
        return bisect_right(self.page_breaks, offset) + 1


@dataclass
class UnstructuredChunk:
    chunk_id: str
    doc_id: str
    page_number: int
    span: tuple[int, int]
    text: str

    @classmethod
    def from_span(cls, doc: SourceDocument, start: int, end: int) -> "UnstructuredChunk":
        text = doc.body[start:end]
        chunk_id = "c" + _short_hash(doc.doc_id, str(start), str(end), text)
        return cls(chunk_id, doc.doc_id, doc.page_number(start), (start, end), text)


@dataclass
class EntityMention:
    surface: str
    entity_type: EntityType
    span: tuple[int, int] | None = None


@dataclass
class RelationMention:
    subject_surface: str
    predicate: str
    object_surface: str


@dataclass
class ErrorAnnotation:
    category: ErrorCategory
    note: str = ""
    span: tuple[int, int] | None = None


@dataclass
class ReviewEvent:
    state: ReviewState
    reviewer_id: str
    timestamp: float


# Legal (state, stage, decision) triples of the review automaton. Everything
# not listed here raises InvalidTransition. Stage-2 Pass is the
# Stage2Verified-equivalent edge; the enum value itself is never produced.
REVIEW_TRANSITIONS: dict[tuple[ReviewState, int, ReviewDecision], ReviewState] = {
    (ReviewState.Sampled, 1, ReviewDecision.Pass): ReviewState.Stage1Annotated,
    (ReviewState.Sampled, 1, ReviewDecision.Flag): ReviewState.Stage1Annotated,
    (ReviewState.Stage1Annotated, 2, ReviewDecision.Pass): ReviewState.Accepted,
    (ReviewState.Stage1Annotated, 2, ReviewDecision.Flag): ReviewState.Returned,
}


@dataclass
class ReviewStatus:
    state: ReviewState = ReviewState.Draft
    annotations: list[ErrorAnnotation] = field(default_factory=list)
    history: list[ReviewEvent] = field(default_factory=list)

    def _advance(self, new_state: ReviewState, reviewer_id: str, timestamp: float | None) -> None:
        ts = time.time() if timestamp is None else timestamp
        self.state = new_state
        self.history.append(ReviewEvent(new_state, reviewer_id, ts))

    def mark_sampled(self, reviewer_id: str = "sampler", timestamp: float | None = None) -> None:
        if self.state is not ReviewState.Draft:
            raise InvalidTransitionError(self.state.value, "sample")
        self._advance(ReviewState.Sampled, reviewer_id, timestamp)

    def apply(
        self,
        stage: int,
        decision: ReviewDecision,
        reviewer_id: str,
        annotations: list[ErrorAnnotation] | None = None,
        timestamp: float | None = None,
    ) -> None:
        key = (self.state, stage, decision)
        if key not in REVIEW_TRANSITIONS:
            raise InvalidTransitionError(self.state.value, f"stage{stage}:{decision.value}")
        if annotations:
            self.annotations.extend(annotations)
        self._advance(REVIEW_TRANSITIONS[key], reviewer_id, timestamp)

    def reopen(self, reviewer_id: str = "system", timestamp: float | None = None) -> None:
        """Returned → Draft, re-entering the proofreading loop."""
        if self.state is not ReviewState.Returned:
            raise InvalidTransitionError(self.state.value, "reopen")
        self._advance(ReviewState.Draft, reviewer_id, timestamp)


@dataclass
class BasicInfo:
    original_text: str
    translation: str
    summary: str
    book_title: str
    page_number: int


@dataclass
class StructuredChunk:
    chunk_id: str
    basic: BasicInfo
    entities: list[EntityMention]
    relations: list[RelationMention]
    status: ReviewStatus = field(default_factory=ReviewStatus)
    # Provenance carried from the source document so chunk files are
    # self-describing for stats and display.
    theme: Theme | None = None
    period: Period | None = None

    def validate(self) -> None:
        """Raise SchemaViolation listing every violated field."""
        violations = schema_violations(self)
        if violations:
            raise SchemaViolationError(violations)


def schema_violations(chunk: StructuredChunk) -> list[str]:
    """Collect schema violations without raising; empty list means valid."""
    bad: list[str] = []
    if not chunk.basic.original_text:
        bad.append("original_text")
    if not chunk.basic.translation:
        bad.append("translation")
    if not chunk.basic.book_title:
        bad.append("book_title")
    if chunk.basic.page_number < 1:
        bad.append("page_number")
    combined = len(chunk.basic.original_text) + len(chunk.basic.translation)
    if len(chunk.basic.summary) >= combined:
        bad.append("summary")
    declared = {m.surface for m in chunk.entities}
    for i, m in enumerate(chunk.entities):
        if not m.surface:
            bad.append(f"entities[{i}].surface")
        if not isinstance(m.entity_type, EntityType):
            bad.append(f"entities[{i}].entity_type")
    for i, r in enumerate(chunk.relations):
        if not r.predicate:
            bad.append(f"relations[{i}].predicate")
        if r.subject_surface not in declared:
            bad.append(f"relations[{i}].subject_surface")
        if r.object_surface not in declared:
            bad.append(f"relations[{i}].object_surface")
    return bad
