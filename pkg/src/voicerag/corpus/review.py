"""Randomized sampling and the two-stage proofreading workflow."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from ..errors import InvalidRateError, InvalidTransitionError
from .models import (
    ErrorAnnotation,
    ReviewDecision,
    ReviewState,
    StructuredChunk,
)


@dataclass
class ReviewRecord:
    stage: int  # 1 or 2
    reviewer_id: str
    decision: ReviewDecision
    annotations: list[ErrorAnnotation] = field(default_factory=list)


def sample_for_review(
    chunks: list[StructuredChunk],
    rate: float,
    seed: int,
    timestamp: float | None = None,
) -> list[str]:
    """Select ceil(rate * n) chunk ids uniformly and mark them Sampled.

    Selection is a pure function of the chunk id set, rate and seed: ids are
    sorted before drawing, so input order never matters.
    """
    if not (0.0 < rate <= 1.0):
        raise InvalidRateError(f"rate must be in (0, 1], got {rate}")
    for chunk in chunks:
        if chunk.status.state is not ReviewState.Draft:
            raise InvalidTransitionError(chunk.status.state.value, "sample")
    if not chunks:
        return []
    ids = sorted(chunk.chunk_id for chunk in chunks)
    count = math.ceil(rate * len(ids))
    selected = set(random.Random(seed).sample(ids, count))
    picked: list[str] = []
    for chunk in chunks:
        if chunk.chunk_id in selected:
            chunk.status.mark_sampled(timestamp=timestamp)
            picked.append(chunk.chunk_id)
    return picked


def apply_review(
    chunk: StructuredChunk, record: ReviewRecord, timestamp: float | None = None
) -> StructuredChunk:
    """Advance one chunk through the review automaton.

    Stage 1 (from Sampled): Pass or Flag both land in Stage1Annotated with
    the annotations attached. Stage 2 (from Stage1Annotated): Pass accepts,
    Flag returns the chunk for re-proofreading. Exactly one history entry is
    appended. Anything else raises InvalidTransition.
    """
    chunk.status.apply(
        stage=record.stage,
        decision=record.decision,
        reviewer_id=record.reviewer_id,
        annotations=record.annotations,
        timestamp=timestamp,
    )
    return chunk


def reopen_for_redraft(
    chunk: StructuredChunk, reviewer_id: str = "system", timestamp: float | None = None
) -> StructuredChunk:
    """Returned → Draft: the chunk re-enters the pipeline."""
    chunk.status.reopen(reviewer_id=reviewer_id, timestamp=timestamp)
    return chunk
