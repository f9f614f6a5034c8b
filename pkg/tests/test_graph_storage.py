"""Graph persistence: round-trips, corruption detection, golden bytes."""

import json
from pathlib import Path

import pytest

from voicerag.errors import CorruptGraphFileError, UnsupportedVersionError
from voicerag.fixtures import make_structured_chunks
from voicerag.graph import (
    KnowledgeGraph,
    build_graph,
    graph_to_lines,
    load_graph,
    persist_graph,
    structurally_equal,
)

GOLDEN = Path(__file__).parent / "data" / "fixture.graph"


def fixture_graph(num_docs=4, sentences=20, seed=13):
    return build_graph(make_structured_chunks(num_docs=num_docs, sentences_per_doc=sentences, seed=seed))


def test_empty_graph_round_trip(tmp_path):
    path = tmp_path / "empty.graph"
    persist_graph(KnowledgeGraph(), path)
    loaded = load_graph(path)
    assert loaded.entities == {} and loaded.edges == [] and loaded.chunk_index == {}


def test_round_trip_structural_equality(tmp_path):
    graph = fixture_graph()
    path = tmp_path / "g.graph"
    persist_graph(graph, path)
    loaded = load_graph(path)
    assert structurally_equal(graph, loaded)
    assert loaded.check_integrity() == []


def test_large_round_trip_structural_equality(tmp_path):
    # ~500 chunks
    graph = build_graph(
        make_structured_chunks(num_docs=50, sentences_per_doc=50, seed=99, max_chars=30)
    )
    assert len(graph.chunk_index) >= 500
    path = tmp_path / "big.graph"
    persist_graph(graph, path)
    assert structurally_equal(graph, load_graph(path))


def test_serialization_is_deterministic(tmp_path):
    graph = fixture_graph()
    a, b = tmp_path / "a.graph", tmp_path / "b.graph"
    persist_graph(graph, a)
    persist_graph(fixture_graph(), b)
    assert a.read_bytes() == b.read_bytes()


def test_golden_file_bytes():
    """The committed golden graph file must match a fresh serialization
    byte for byte (regenerate with tests/data/regen.py if the format
    changes deliberately)."""
    graph = fixture_graph(num_docs=2, sentences=8, seed=5)
    expected = "\n".join(graph_to_lines(graph)) + "\n"
    assert GOLDEN.read_text(encoding="utf-8") == expected


def test_truncated_file_rejected(tmp_path):
    graph = fixture_graph()
    path = tmp_path / "g.graph"
    persist_graph(graph, path)
    lines = path.read_text(encoding="utf-8").splitlines()
    truncated = tmp_path / "trunc.graph"
    truncated.write_text("\n".join(lines[: len(lines) // 2]) + "\n", encoding="utf-8")
    with pytest.raises(CorruptGraphFileError):
        load_graph(truncated)


def test_garbage_line_reports_position(tmp_path):
    graph = fixture_graph()
    path = tmp_path / "g.graph"
    persist_graph(graph, path)
    lines = path.read_text(encoding="utf-8").splitlines()
    lines[1] = "{not json"
    bad = tmp_path / "bad.graph"
    bad.write_text("\n".join(lines) + "\n", encoding="utf-8")
    with pytest.raises(CorruptGraphFileError) as exc:
        load_graph(bad)
    assert exc.value.line == 2


def test_version_mismatch(tmp_path):
    path = tmp_path / "v2.graph"
    header = {"version": "v2", "counts": {"entities": 0, "edges": 0, "chunks": 0}}
    path.write_text(json.dumps(header) + "\n", encoding="utf-8")
    with pytest.raises(UnsupportedVersionError):
        load_graph(path)


def test_dangling_edge_detected_on_load(tmp_path):
    graph = fixture_graph()
    path = tmp_path / "g.graph"
    persist_graph(graph, path)
    lines = path.read_text(encoding="utf-8").splitlines()
    header = json.loads(lines[0])
    n_entities = header["counts"]["entities"]
    edge = json.loads(lines[1 + n_entities])
    edge["subject_id"] = "e0000000000000000"
    lines[1 + n_entities] = json.dumps(edge, ensure_ascii=False, sort_keys=True, separators=(",", ":"))
    bad = tmp_path / "dangling.graph"
    bad.write_text("\n".join(lines) + "\n", encoding="utf-8")
    with pytest.raises(CorruptGraphFileError):
        load_graph(bad)
