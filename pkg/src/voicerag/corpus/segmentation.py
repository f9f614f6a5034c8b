"""Lossless document segmentation.

Cuts a document body into chunks that always end at boundary punctuation
(or at end of body). A punctuation-free run longer than the window becomes
one oversized chunk rather than being split mid-run, so concatenating the
chunk texts always reproduces the body character-for-character.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import EmptyDocumentError
from .models import SourceDocument, UnstructuredChunk

# Sentence-terminal marks common in the classical-Chinese corpus plus their
# ASCII counterparts.
DEFAULT_BOUNDARY_PUNCTUATION = frozenset("。！？…!?.")

DEFAULT_MAX_CHARS = 500


@dataclass
class SegmentPolicy:
    max_chars: int = DEFAULT_MAX_CHARS
    boundary_punctuation: frozenset[str] = field(default=DEFAULT_BOUNDARY_PUNCTUATION)

    def __post_init__(self) -> None:
        if self.max_chars < 1:
            raise ValueError("max_chars must be >= 1")
        if not self.boundary_punctuation:
            raise ValueError("boundary_punctuation must be nonempty")
        self.boundary_punctuation = frozenset(self.boundary_punctuation)


def segment_document(
    doc: SourceDocument, policy: SegmentPolicy | None = None
) -> list[UnstructuredChunk]:
    """Split `doc.body` into ordered, non-overlapping, covering chunks.

    Each chunk ends at a boundary punctuation character whenever one exists
    within the `max_chars` window; a window without punctuation extends to
    the next punctuation mark (forced overrun) or to the end of the body.
    """
    if not doc.body:
        raise EmptyDocumentError(f"document {doc.doc_id!r} has an empty body")
    policy = policy or SegmentPolicy()
    punct = policy.boundary_punctuation
    body = doc.body
    n = len(body)

    chunks: list[UnstructuredChunk] = []
    pos = 0
    while pos < n:
        window_end = min(pos + policy.max_chars, n)
        cut = _last_punct(body, pos, window_end, punct)
        if cut is not None:
            end = cut + 1
        elif window_end == n:
            end = n  # trailing residue without punctuation
        else:
            # Forced overrun: finish the current run at its next punctuation
            # mark (or end of body).
            nxt = _first_punct(body, window_end, n, punct)
            end = n if nxt is None else nxt + 1
        chunks.append(UnstructuredChunk.from_span(doc, pos, end))
        pos = end
    return chunks


def _last_punct(body: str, start: int, end: int, punct: frozenset[str]) -> int | None:
    for i in range(end - 1, start - 1, -1):
        if body[i] in punct:
            return i
    return None


def _first_punct(body: str, start: int, end: int, punct: frozenset[str]) -> int | None:
    for i in range(start, end):
        if body[i] in punct:
            return i
    return None
