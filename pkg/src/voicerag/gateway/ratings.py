"""Subjective rating records and their aggregation."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from ..errors import RatingInvalidError


class RatingDimension(Enum):
    Professionalism = "Professionalism"
    Informativeness = "Informativeness"
    LogicalCoherence = "LogicalCoherence"
    Fluency = "Fluency"


@dataclass
class RatingRecord:
    session_id: str
    dimension: RatingDimension
    score: int
    rater_id: str


def validate_rating(record: dict) -> RatingRecord:
    """Parse an incoming rating document, rejecting anything out of range."""
    try:
        dimension = RatingDimension(record["dimension"])
    except (KeyError, ValueError) as exc:
        raise RatingInvalidError(f"unknown dimension: {record.get('dimension')!r}") from exc
    score = record.get("score")
    if not isinstance(score, int) or isinstance(score, bool) or not (1 <= score <= 5):
        raise RatingInvalidError(f"score must be an integer in [1, 5], got {score!r}")
    session_id = record.get("session_id")
    rater_id = record.get("rater_id")
    if not session_id or not isinstance(session_id, str):
        raise RatingInvalidError("session_id is required")
    if not rater_id or not isinstance(rater_id, str):
        raise RatingInvalidError("rater_id is required")
    return RatingRecord(session_id=session_id, dimension=dimension, score=score, rater_id=rater_id)


def aggregate_ratings(records: list[RatingRecord]) -> dict[RatingDimension, float]:
    """Mean score per dimension; dimensions with no records are omitted."""
    sums: dict[RatingDimension, list[int]] = {}
    for record in records:
        sums.setdefault(record.dimension, []).append(record.score)
    return {dim: sum(scores) / len(scores) for dim, scores in sums.items()}


def radar_export(aggregate: dict[RatingDimension, float]) -> list[list]:
    """(dimension, value) pairs in fixed dimension order for chart rendering."""
    return [[dim.value, aggregate[dim]] for dim in RatingDimension if dim in aggregate]
