"""Corpus ingestion: segmentation, structuring, review workflow, statistics."""

from .models import (
    BasicInfo,
    EntityMention,
    EntityType,
    ErrorAnnotation,
    ErrorCategory,
    Period,
    RelationMention,
    ReviewDecision,
    ReviewState,
    ReviewStatus,
    SourceDocument,
    StructuredChunk,
    Theme,
    UnstructuredChunk,
)
from .review import ReviewRecord, apply_review, reopen_for_redraft, sample_for_review
from .segmentation import DEFAULT_BOUNDARY_PUNCTUATION, SegmentPolicy, segment_document
from .statistics import CorpusStats, corpus_stats
from .structuring import StructuredDraft, Structurer, StubStructurer, structure_chunk

__all__ = [
    "BasicInfo",
    "CorpusStats",
    "DEFAULT_BOUNDARY_PUNCTUATION",
    "EntityMention",
    "EntityType",
    "ErrorAnnotation",
    "ErrorCategory",
    "Period",
    "RelationMention",
    "ReviewDecision",
    "ReviewRecord",
    "ReviewState",
    "ReviewStatus",
    "SegmentPolicy",
    "SourceDocument",
    "StructuredChunk",
    "StructuredDraft",
    "Structurer",
    "StubStructurer",
    "Theme",
    "UnstructuredChunk",
    "apply_review",
    "corpus_stats",
    "reopen_for_redraft",
    "sample_for_review",
    "segment_document",
    "structure_chunk",
]
