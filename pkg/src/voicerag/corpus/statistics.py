"""Corpus statistics: per-theme chunk counts."""

from __future__ import annotations

from dataclasses import dataclass

from .models import StructuredChunk, Theme


@dataclass
class CorpusStats:
    per_theme: dict[Theme, int]
    total: int


def corpus_stats(chunks: list[StructuredChunk]) -> CorpusStats:
    """Count chunks per theme; every theme key is present even at zero.

    The total always equals both the chunk count and the per-theme sum, so
    chunks are required to carry theme provenance.
    """
    per_theme = {theme: 0 for theme in Theme}
    for chunk in chunks:
        if chunk.theme is None:
            raise ValueError(f"chunk {chunk.chunk_id} has no theme provenance")
        per_theme[chunk.theme] += 1
    return CorpusStats(per_theme=per_theme, total=len(chunks))
