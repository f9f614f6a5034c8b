"""Dual-level retrieval over the knowledge graph.

Low level matches entities by keyword, high level matches edges whose
predicate or endpoints match; candidate chunks come from the provenance of
matched entities/edges plus adjacency expansion, scored additively
(entity hits weigh 2, edge hits weigh 1) and truncated to top-k with ties
broken by ascending chunk id.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field

from ..errors import BudgetExceededError, InvalidKError
from .model import Entity, KnowledgeGraph, RelationEdge, normalize_entity_name

ENTITY_WEIGHT = 2
EDGE_WEIGHT = 1

# Single CJK function characters and short latin fillers; single-character
# stopwords also act as token separators inside unsegmented CJK runs.
DEFAULT_STOPWORDS = frozenset(
    "的之了而与于是在从哪里吗呢啊乎哉ど又及其此何如若所者也以为有无么什谁"
) | frozenset({"the", "a", "an", "of", "and", "in", "is", "to", "what", "where", "who"})


@dataclass
class RetrievalContext:
    matched_entities: list[Entity] = field(default_factory=list)
    matched_edges: list[RelationEdge] = field(default_factory=list)
    chunks: list[tuple[str, float]] = field(default_factory=list)
    keywords_used: list[str] = field(default_factory=list)


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def extract_keywords(
    graph: KnowledgeGraph, query: str, stopwords: frozenset[str] = DEFAULT_STOPWORDS
) -> list[str]:
    """Known entity surfaces first (maximal matches), then residual tokens.

    The residue splits on whitespace, punctuation and single-character
    stopwords; multi-character tokens that are themselves stopwords drop
    out. Result is ordered and deduplicated.
    """
    text = normalize_entity_name(query)
    if not text:
        return []

    surfaces_by_head: dict[str, list[str]] = {}
    for entity in graph.entities.values():
        for surface in {entity.canonical_name, *entity.aliases}:
            normalized = normalize_entity_name(surface)
            if normalized:
                surfaces_by_head.setdefault(normalized[0], []).append(normalized)
    for candidates in surfaces_by_head.values():
        candidates.sort(key=len, reverse=True)

    entity_hits: list[str] = []
    residue_parts: list[str] = []
    buf: list[str] = []
    i = 0
    while i < len(text):
        hit = None
        for surface in surfaces_by_head.get(text[i], ()):
            if text.startswith(surface, i):
                hit = surface
                break
        if hit is not None:
            if buf:
                residue_parts.append("".join(buf))
                buf = []
            entity_hits.append(hit)
            i += len(hit)
        else:
            buf.append(text[i])
            i += 1
    if buf:
        residue_parts.append("".join(buf))

    residual_tokens: list[str] = []
    for part in residue_parts:
        token: list[str] = []
        for ch in part:
            if ch.isspace() or _is_punct(ch) or ch in stopwords:
                if token:
                    residual_tokens.append("".join(token))
                    token = []
            else:
                token.append(ch)
        if token:
            residual_tokens.append("".join(token))

    ordered: list[str] = []
    seen: set[str] = set()
    for kw in entity_hits + [t for t in residual_tokens if t.lower() not in stopwords]:
        if kw not in seen:
            seen.add(kw)
            ordered.append(kw)
    return ordered


def _entity_keyword_hits(entity: Entity, keywords: list[str]) -> int:
    names = {normalize_entity_name(entity.canonical_name)}
    names.update(normalize_entity_name(a) for a in entity.aliases)
    return sum(1 for kw in keywords if normalize_entity_name(kw) in names)


def _edge_keyword_hits(graph: KnowledgeGraph, edge: RelationEdge, keywords: list[str]) -> int:
    hits = sum(1 for kw in keywords if normalize_entity_name(kw) == normalize_entity_name(edge.predicate))
    for eid in (edge.subject_id, edge.object_id):
        entity = graph.entities.get(eid)
        if entity is not None:
            hits += _entity_keyword_hits(entity, keywords)
    return hits


def retrieve_context(
    graph: KnowledgeGraph,
    query: str,
    k: int,
    depth: int = 1,
    entity_weight: float = ENTITY_WEIGHT,
    edge_weight: float = EDGE_WEIGHT,
) -> RetrievalContext:
    """Deterministic dual-level retrieval.

    Scores come only from direct keyword hits; adjacency expansion up to
    `depth` hops widens the candidate set (neighbors' chunks may enter with
    score 0). Chunks sort by (score desc, chunk_id asc), truncated to k.
    """
    if k < 1:
        raise InvalidKError(f"k must be >= 1, got {k}")
    if depth not in (0, 1, 2):
        raise ValueError(f"depth must be 0, 1 or 2, got {depth}")

    keywords = extract_keywords(graph, query)
    ctx = RetrievalContext(keywords_used=keywords)
    if not keywords:
        return ctx

    entity_hits: dict[str, int] = {}
    for eid, entity in graph.entities.items():
        hits = _entity_keyword_hits(entity, keywords)
        if hits:
            entity_hits[eid] = hits
    edge_hits: dict[int, int] = {}
    for i, edge in enumerate(graph.edges):
        hits = _edge_keyword_hits(graph, edge, keywords)
        if hits:
            edge_hits[i] = hits

    # Adjacency expansion over entities.
    frontier = set(entity_hits)
    expanded = set(frontier)
    for _ in range(depth):
        nxt: set[str] = set()
        for eid in frontier:
            nxt |= graph.neighbors(eid)
        frontier = nxt - expanded
        expanded |= nxt
        if not frontier:
            break

    candidates: set[str] = set()
    for eid in expanded:
        candidates |= graph.entities[eid].chunk_refs
    for i in edge_hits:
        candidates |= graph.edges[i].chunk_refs

    scores: dict[str, float] = {cid: 0.0 for cid in candidates}
    for eid, hits in entity_hits.items():
        for cid in graph.entities[eid].chunk_refs:
            scores[cid] += entity_weight * hits
    for i, hits in edge_hits.items():
        for cid in graph.edges[i].chunk_refs:
            scores[cid] += edge_weight * hits

    ranked = sorted(scores.items(), key=lambda item: (-item[1], item[0]))
    ctx.chunks = ranked[:k]
    ctx.matched_entities = [
        graph.entities[eid]
        for eid, _ in sorted(entity_hits.items(), key=lambda item: (-item[1], item[0]))
    ]
    ctx.matched_edges = [
        graph.edges[i]
        for i, _ in sorted(edge_hits.items(), key=lambda item: (-item[1], graph.edges[item[0]].triple))
    ]
    return ctx


PROMPT_PREAMBLE = "请依据下列文献回答所问，并注明出处。\n【问】"


def format_context_prompt(
    ctx: RetrievalContext,
    query: str,
    budget_chars: int,
    graph: KnowledgeGraph | None = None,
) -> str:
    """Assemble the LLM prompt: preamble, verbatim query, ranked chunk
    records with book/page provenance. Lowest-ranked chunks drop first when
    the budget binds; a record never splits."""
    head = f"{PROMPT_PREAMBLE}{query}\n"
    if len(head) > budget_chars:
        raise BudgetExceededError(
            f"budget {budget_chars} cannot fit the query and preamble ({len(head)} chars)"
        )
    if not ctx.chunks or graph is None:
        return head

    parts = [head]
    total = len(head)
    for cid, _score in ctx.chunks:
        chunk = graph.chunk_index.get(cid)
        if chunk is None:
            continue
        record = (
            f"【出处】《{chunk.basic.book_title}》第{chunk.basic.page_number}页\n"
            f"【原文】{chunk.basic.original_text}\n"
            f"【今译】{chunk.basic.translation}\n"
        )
        if total + len(record) > budget_chars:
            break
        parts.append(record)
        total += len(record)
    return "".join(parts)
