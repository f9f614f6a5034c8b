"""Synthetic fixture corpus.

A closed vocabulary of entity surfaces and predicates, plus sentence
templates, generates deterministic classical-style documents. The stub
structurer's default dictionary is exactly this gazetteer, so every
generated sentence round-trips through extraction with known entities and
relations. Substitutes for the real corpus, which is out of scope.
"""

from __future__ import annotations

import random

from .corpus.models import (
    EntityType,
    Period,
    ReviewDecision,
    SourceDocument,
    StructuredChunk,
    Theme,
    BasicInfo,
    ReviewState,
    ReviewStatus,
    ReviewEvent,
)
from .corpus.review import ReviewRecord, apply_review
from .corpus.segmentation import SegmentPolicy, segment_document
from .corpus.structuring import StubStructurer, structure_chunk

GAZETTEER: dict[str, EntityType] = {
    # persons
    "禹": EntityType.Person,
    "郦道元": EntityType.Person,
    "王景": EntityType.Person,
    "贾让": EntityType.Person,
    "潘季驯": EntityType.Person,
    "西门豹": EntityType.Person,
    "白圭": EntityType.Person,
    # rivers
    "黄河": EntityType.River,
    "河": EntityType.River,
    "洛水": EntityType.River,
    "渭水": EntityType.River,
    "汾水": EntityType.River,
    "济水": EntityType.River,
    "淮河": EntityType.River,
    # places
    "龙门": EntityType.Place,
    "孟津": EntityType.Place,
    "砥柱": EntityType.Place,
    "开封": EntityType.Place,
    "兰州": EntityType.Place,
    "昆仑": EntityType.Place,
    "瓠子": EntityType.Place,
    "铜瓦厢": EntityType.Place,
    # dynasties
    "夏": EntityType.Dynasty,
    "汉": EntityType.Dynasty,
    "唐": EntityType.Dynasty,
    "宋": EntityType.Dynasty,
    "明": EntityType.Dynasty,
    "清": EntityType.Dynasty,
    # works
    "水经注": EntityType.Work,
    "禹贡": EntityType.Work,
    "河防一览": EntityType.Work,
    "治河方略": EntityType.Work,
    "史记": EntityType.Work,
    # institutions
    "都水监": EntityType.Institution,
    "河道衙门": EntityType.Institution,
    # events
    "瓠子决口": EntityType.Event,
    "铜瓦厢改道": EntityType.Event,
    # terms
    "堤防": EntityType.Term,
    "束水攻沙": EntityType.Term,
    "漕运": EntityType.Term,
    "分洪": EntityType.Term,
    "河工": EntityType.Term,
}

PREDICATES: frozenset[str] = frozenset(
    {"治", "疏", "导", "载", "记", "修", "掌", "撰", "流经", "源出", "决于", "发源"}
)

# (template, slot types); slots are filled from the gazetteer by type.
_TEMPLATES: list[tuple[str, tuple[EntityType, ...]]] = [
    ("{0}治{1}。", (EntityType.Person, EntityType.River)),
    ("{0}疏{1}。", (EntityType.Person, EntityType.River)),
    ("{0}修{1}。", (EntityType.Person, EntityType.Term)),
    ("{0}撰{1}。", (EntityType.Person, EntityType.Work)),
    ("{0}流经{1}。", (EntityType.River, EntityType.Place)),
    ("{0}源出{1}。", (EntityType.River, EntityType.Place)),
    ("{0}发源{1}。", (EntityType.River, EntityType.Place)),
    ("{0}决于{1}。", (EntityType.River, EntityType.Place)),
    ("{0}载{1}。", (EntityType.Work, EntityType.Event)),
    ("{0}记{1}。", (EntityType.Work, EntityType.River)),
    ("{0}掌{1}。", (EntityType.Institution, EntityType.Term)),
]

_FILLERS = [
    "其水汤汤，不舍昼夜。",
    "民赖其利，岁以为常。",
    "其事详矣，史笔昭然。",
    "岁有丰歉，皆系于水。",
    "堤防既固，水患乃息。",
]

_TITLE_STEMS = ["河渠考信录", "水道提纲", "河防纪略", "治水金鉴", "河源纪行", "漕河志略"]

FIXTURE_QUERIES = [
    "黄河从哪里发源？",
    "禹治水的事迹如何？",
    "水经注记载了什么？",
    "潘季驯如何治河？",
    "黄河决口在何处？",
]


def default_structurer() -> StubStructurer:
    return StubStructurer(GAZETTEER, PREDICATES)


def _surfaces_by_type() -> dict[EntityType, list[str]]:
    by_type: dict[EntityType, list[str]] = {}
    for surface, etype in GAZETTEER.items():
        by_type.setdefault(etype, []).append(surface)
    for surfaces in by_type.values():
        surfaces.sort()
    return by_type


_BY_TYPE = _surfaces_by_type()


def make_sentence(rng: random.Random) -> str:
    if rng.random() < 0.2:
        return rng.choice(_FILLERS)
    template, slots = rng.choice(_TEMPLATES)
    return template.format(*(rng.choice(_BY_TYPE[t]) for t in slots))


def make_corpus(
    num_docs: int = 4,
    sentences_per_doc: int = 24,
    seed: int = 7,
    page_chars: int = 120,
) -> list[SourceDocument]:
    """Deterministic synthetic documents with page breaks."""
    rng = random.Random(seed)
    periods = list(Period)
    themes = list(Theme)
    docs: list[SourceDocument] = []
    for i in range(num_docs):
        stem = _TITLE_STEMS[i % len(_TITLE_STEMS)]
        title = stem if i < len(_TITLE_STEMS) else f"{stem}·卷{i // len(_TITLE_STEMS) + 1}"
        body = "".join(make_sentence(rng) for _ in range(sentences_per_doc))
        page_breaks = list(range(page_chars, len(body), page_chars))
        docs.append(
            SourceDocument.create(
                title=title,
                period=rng.choice(periods),
                theme=themes[i % len(themes)],
                body=body,
                page_breaks=page_breaks,
            )
        )
    return docs


def accept_chunk(chunk: StructuredChunk, t0: float = 1700000000.0) -> StructuredChunk:
    """Walk one chunk through sample → stage 1 → stage 2 Pass with fixed timestamps."""
    chunk.status.mark_sampled(timestamp=t0)
    apply_review(chunk, ReviewRecord(1, "r1", ReviewDecision.Pass), timestamp=t0 + 1)
    apply_review(chunk, ReviewRecord(2, "r2", ReviewDecision.Pass), timestamp=t0 + 2)
    return chunk


def make_structured_chunks(
    num_docs: int = 4,
    sentences_per_doc: int = 24,
    seed: int = 7,
    max_chars: int = 60,
    accept: bool = True,
) -> list[StructuredChunk]:
    """Segment and structure a synthetic corpus with the stub structurer."""
    structurer = default_structurer()
    policy = SegmentPolicy(max_chars=max_chars)
    chunks: list[StructuredChunk] = []
    for doc in make_corpus(num_docs, sentences_per_doc, seed):
        for raw in segment_document(doc, policy):
            structured = structure_chunk(raw, doc, structurer)
            if accept:
                accept_chunk(structured)
            chunks.append(structured)
    return chunks


# The published per-theme distribution reproduced by the stats fixture.
REFERENCE_THEME_COUNTS: dict[Theme, int] = {
    Theme.RiverGovernance: 6125,
    Theme.TechnologyEngineering: 4369,
    Theme.NaturalKnowledge: 2552,
    Theme.SocioEconomic: 1649,
    Theme.CulturalHeritage: 1778,
    Theme.HistoricalNarratives: 1551,
    Theme.DisastersImpacts: 1268,
    Theme.Interdisciplinary: 1116,
}


def make_reference_distribution_chunks() -> list[StructuredChunk]:
    """Minimal chunks mirroring the reference per-theme counts (total 20408)."""
    chunks: list[StructuredChunk] = []
    t0 = 1700000000.0
    status_template = [
        ReviewEvent(ReviewState.Sampled, "sampler", t0),
        ReviewEvent(ReviewState.Stage1Annotated, "r1", t0 + 1),
        ReviewEvent(ReviewState.Accepted, "r2", t0 + 2),
    ]
    for theme, count in REFERENCE_THEME_COUNTS.items():
        for i in range(count):
            chunks.append(
                StructuredChunk(
                    chunk_id=f"c-{theme.value}-{i:05d}",
                    basic=BasicInfo(
                        original_text="河。",
                        translation="今译：河。",
                        summary="河",
                        book_title="样本志",
                        page_number=1,
                    ),
                    entities=[],
                    relations=[],
                    status=ReviewStatus(
                        state=ReviewState.Accepted,
                        history=list(status_template),
                    ),
                    theme=theme,
                    period=Period.Contemporary,
                )
            )
    return chunks


def write_demo_corpus(docs_dir, num_docs: int = 4, seed: int = 7) -> None:
    """Materialize a demo corpus as .txt + .meta.json files for `ingest`."""
    from .corpus.chunkfile import write_document

    for i, doc in enumerate(make_corpus(num_docs=num_docs, seed=seed)):
        write_document(
            docs_dir,
            f"doc{i:02d}",
            doc.body,
            {
                "title": doc.title,
                "period": doc.period.value,
                "theme": doc.theme.value,
                "page_breaks": doc.page_breaks,
            },
        )
