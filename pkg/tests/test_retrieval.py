"""Keyword extraction, dual-level retrieval, prompt formatting."""

import random

import pytest

from voicerag.errors import BudgetExceededError, InvalidKError
from voicerag.fixtures import make_structured_chunks
from voicerag.graph import (
    build_graph,
    extract_keywords,
    format_context_prompt,
    normalize_entity_name,
    retrieve_context,
)
from voicerag.graph.retrieval import EDGE_WEIGHT, ENTITY_WEIGHT


def fixture_graph(num_docs=6, sentences=30, seed=13, max_chars=40):
    return build_graph(
        make_structured_chunks(num_docs=num_docs, sentences_per_doc=sentences, seed=seed, max_chars=max_chars)
    )


GRAPH = fixture_graph()


def test_keywords_entity_then_residue():
    # Hand-applied rules: 黄河 is a known surface; 的 is a stopword separator
    # leaving 治理 as the residual token.
    assert extract_keywords(GRAPH, "黄河的治理") == ["黄河", "治理"]


def test_keywords_empty_query():
    assert extract_keywords(GRAPH, "") == []


def test_keywords_exact_entity_surface():
    assert extract_keywords(GRAPH, "黄河") == ["黄河"]


def test_keywords_ordered_dedup():
    kws = extract_keywords(GRAPH, "黄河，黄河与禹")
    assert kws == ["黄河", "禹"]


def test_keywords_fixture_voice_query():
    assert extract_keywords(GRAPH, "黄河从哪里发源？") == ["黄河", "发源"]


def brute_force_retrieve(graph, query, k, depth):
    """Exhaustive reimplementation: score every chunk, BFS candidates."""
    keywords = extract_keywords(graph, query)
    if not keywords:
        return [], set()

    def ent_hits(entity):
        names = {normalize_entity_name(entity.canonical_name)}
        names |= {normalize_entity_name(a) for a in entity.aliases}
        return sum(1 for kw in keywords if normalize_entity_name(kw) in names)

    entity_hits = {eid: ent_hits(e) for eid, e in graph.entities.items()}
    entity_hits = {eid: h for eid, h in entity_hits.items() if h}

    edge_hits = {}
    for i, edge in enumerate(graph.edges):
        h = sum(
            1 for kw in keywords
            if normalize_entity_name(kw) == normalize_entity_name(edge.predicate)
        )
        h += ent_hits(graph.entities[edge.subject_id])
        h += ent_hits(graph.entities[edge.object_id])
        if h:
            edge_hits[i] = h

    reach = set(entity_hits)
    for _ in range(depth):
        grown = set(reach)
        for i, edge in enumerate(graph.edges):
            if edge.subject_id in reach:
                grown.add(edge.object_id)
            if edge.object_id in reach:
                grown.add(edge.subject_id)
        reach = grown

    candidates = set()
    for eid in reach:
        candidates |= graph.entities[eid].chunk_refs
    for i in edge_hits:
        candidates |= graph.edges[i].chunk_refs

    scores = {}
    for cid in graph.chunk_index:  # exhaustive scoring over all chunks
        s = 0.0
        for eid, h in entity_hits.items():
            if cid in graph.entities[eid].chunk_refs:
                s += ENTITY_WEIGHT * h
        for i, h in edge_hits.items():
            if cid in graph.edges[i].chunk_refs:
                s += EDGE_WEIGHT * h
        scores[cid] = s

    ranked = sorted(
        ((cid, scores[cid]) for cid in candidates), key=lambda t: (-t[1], t[0])
    )
    return ranked[:k], candidates


def test_single_entity_depth0_returns_all_provenance_chunks():
    entity = next(e for e in GRAPH.entities.values() if e.canonical_name == "黄河")
    k = len(GRAPH.chunk_index)
    ctx = retrieve_context(GRAPH, "黄河", k=k, depth=0)
    returned = {cid for cid, _ in ctx.chunks}
    assert entity.chunk_refs <= returned


def test_query_matching_nothing_is_empty():
    ctx = retrieve_context(GRAPH, "了之的", k=5, depth=1)
    assert ctx.chunks == [] and ctx.matched_entities == [] and ctx.matched_edges == []


def test_k_zero_rejected():
    with pytest.raises(InvalidKError):
        retrieve_context(GRAPH, "黄河", k=0)


def test_scores_match_brute_force_over_all_chunks():
    queries = ["黄河", "禹治河", "水经注记载了什么", "龙门", "黄河从哪里发源？", "潘季驯修堤防"]
    for depth in (0, 1, 2):
        for query in queries:
            k = len(GRAPH.chunk_index) + 5
            ctx = retrieve_context(GRAPH, query, k=k, depth=depth)
            expected, candidates = brute_force_retrieve(GRAPH, query, k, depth)
            assert ctx.chunks == expected, (query, depth)
            assert {cid for cid, _ in ctx.chunks} == candidates


def test_retrieval_deterministic():
    a = retrieve_context(GRAPH, "禹治河", k=10, depth=1)
    b = retrieve_context(GRAPH, "禹治河", k=10, depth=1)
    assert a.chunks == b.chunks
    assert a.keywords_used == b.keywords_used
    assert [e.entity_id for e in a.matched_entities] == [e.entity_id for e in b.matched_entities]


def test_chunks_sorted_by_score_then_id():
    ctx = retrieve_context(GRAPH, "禹治河", k=50, depth=1)
    assert ctx.chunks == sorted(ctx.chunks, key=lambda t: (-t[1], t[0]))


def test_depth_expansion_widens_candidates():
    sizes = []
    k = len(GRAPH.chunk_index) + 5
    for depth in (0, 1, 2):
        sizes.append(len(retrieve_context(GRAPH, "禹", k=k, depth=depth).chunks))
    assert sizes[0] <= sizes[1] <= sizes[2]


def test_empty_context_prompt_is_preamble_plus_query():
    ctx = retrieve_context(GRAPH, "往事如何", k=5)
    prompt = format_context_prompt(ctx, "往事如何", 500, GRAPH)
    assert "往事如何" in prompt
    assert "【出处】" not in prompt


def test_generous_budget_includes_all_in_rank_order():
    ctx = retrieve_context(GRAPH, "黄河", k=3, depth=0)
    assert len(ctx.chunks) == 3
    prompt = format_context_prompt(ctx, "黄河", 100000, GRAPH)
    positions = []
    for cid, _ in ctx.chunks:
        chunk = GRAPH.chunk_index[cid]
        positions.append(prompt.index(chunk.basic.original_text))
    assert positions == sorted(positions)
    assert all(
        f"《{GRAPH.chunk_index[cid].basic.book_title}》" in prompt for cid, _ in ctx.chunks
    )


def test_budget_truncates_lowest_ranked_first():
    ctx = retrieve_context(GRAPH, "黄河", k=5, depth=1)
    assert len(ctx.chunks) >= 3
    full = format_context_prompt(ctx, "黄河", 100000, GRAPH)

    # Enumerate cumulative lengths to derive the expected prefix per budget.
    head_len = len(full.split("【出处】")[0])
    records = ["【出处】" + part for part in full.split("【出处】")[1:]]
    cumulative = []
    total = head_len
    for record in records:
        total += len(record)
        cumulative.append(total)

    for included in range(len(records) + 1):
        budget = cumulative[included - 1] if included else head_len
        prompt = format_context_prompt(ctx, "黄河", budget, GRAPH)
        assert prompt.count("【出处】") == included


def test_budget_too_small_for_query():
    ctx = retrieve_context(GRAPH, "黄河", k=1)
    with pytest.raises(BudgetExceededError):
        format_context_prompt(ctx, "黄河" * 50, 20, GRAPH)
