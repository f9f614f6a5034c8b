"""Gateway HTTP/WS endpoints via the ASGI test client."""

import base64
import threading

import pytest
from fastapi.testclient import TestClient

from voicerag.backends import StubPacing, make_fixture_wav
from voicerag.gateway.config import parse_config
from voicerag.gateway.server import create_app

EVENT_TYPES_IN_ORDER = ["context", "token", "sentence", "audio", "frame", "metrics", "end"]


@pytest.fixture(scope="module")
def app(fixture_graph):
    config = parse_config(
        {"backends": {"pacing": {"asr_rtf": 0, "llm_rate": 0, "tts_rtf": 0, "frame_cost": 0},
                      "char_duration": 0.05}},
        env={},
    )
    return create_app(config, graph=fixture_graph)


@pytest.fixture(scope="module")
def fixture_graph():
    from voicerag.fixtures import make_structured_chunks
    from voicerag.graph import build_graph

    return build_graph(make_structured_chunks(num_docs=6, sentences_per_doc=30, seed=13, max_chars=40))


def read_response(ws):
    events = []
    while True:
        message = ws.receive_json()
        events.append(message)
        if message["type"] in ("end", "error") and message["type"] == "end":
            break
        if message["type"] == "error" and message["payload"].get("stage") == "gateway":
            break
    return events


def test_text_query_event_sequence(app):
    with TestClient(app) as client:
        with client.websocket_connect("/session") as ws:
            hello = ws.receive_json()
            assert hello == {"type": "hello", "protocol": "v1"}
            ws.send_json({"query_text": "黄河从哪里发源？"})
            events = read_response(ws)

    types = [e["type"] for e in events]
    # All stages represented, in causal first-occurrence order.
    first = {t: types.index(t) for t in set(types)}
    assert first["context"] < first["token"] < first["sentence"]
    assert first["sentence"] < first["audio"] < first["frame"] or first["audio"] > 0
    assert types[-2:] == ["metrics", "end"]
    seqs = [e["seq"] for e in events]
    assert seqs == list(range(len(events)))


def test_audio_query_roundtrip(app):
    wav = make_fixture_wav("禹治水的事迹如何？", 0.5)
    with TestClient(app) as client:
        with client.websocket_connect("/session") as ws:
            ws.receive_json()
            mid = len(wav) // 2
            ws.send_bytes(wav[:mid])
            ws.send_bytes(wav[mid:])
            ws.send_json({"audio_end": True})
            events = read_response(ws)
    types = [e["type"] for e in events]
    assert types[0] == "transcript"
    transcript = events[0]["payload"]["text"]
    assert transcript == "禹治水的事迹如何？"
    audio = b"".join(
        base64.b64decode(e["payload"]["data_b64"]) for e in events if e["type"] == "audio"
    )
    assert len(audio) > 0 and len(audio) % 2 == 0


def test_two_sequential_queries_reset_seq(app):
    with TestClient(app) as client:
        with client.websocket_connect("/session") as ws:
            ws.receive_json()
            ws.send_json({"query_text": "黄河从哪里发源？"})
            first = read_response(ws)
            ws.send_json({"query_text": "水经注记载了什么？"})
            second = read_response(ws)
    assert first[0]["seq"] == 0 and second[0]["seq"] == 0
    assert [e["seq"] for e in second] == list(range(len(second)))
    assert first[-1]["type"] == "end" and second[-1]["type"] == "end"


def test_malformed_json_gets_error_and_close(app):
    with TestClient(app) as client:
        with client.websocket_connect("/session") as ws:
            ws.receive_json()
            ws.send_text("{not json")
            message = ws.receive_json()
            assert message["type"] == "error"
            assert message["payload"]["stage"] == "gateway"


def test_metrics_endpoint_lists_sessions(fixture_graph):
    config = parse_config(
        {"backends": {"pacing": {"asr_rtf": 0, "llm_rate": 0, "tts_rtf": 0, "frame_cost": 0},
                      "char_duration": 0.05}},
        env={},
    )
    app = create_app(config, graph=fixture_graph)
    with TestClient(app) as client:
        assert client.get("/metrics").json() == {"sessions": []}
        for query in ("黄河从哪里发源？", "禹治水的事迹如何？", "水经注记载了什么？"):
            with client.websocket_connect("/session") as ws:
                ws.receive_json()
                ws.send_json({"query_text": query})
                read_response(ws)
        doc = client.get("/metrics").json()
    assert len(doc["sessions"]) == 3
    aggregate = doc["aggregate"]
    values = [s["llm_tokens_per_second"] for s in doc["sessions"]]
    assert aggregate["llm_tokens_per_second"] == pytest.approx(sum(values) / 3)
    # Text-query sessions carry no ASR metric.
    assert all(s["asr_time_per_audio_second"] is None for s in doc["sessions"])
    assert "asr_time_per_audio_second" not in aggregate


def test_ratings_endpoints(app):
    with TestClient(app) as client:
        ok = client.post("/ratings", json={
            "session_id": "s1", "dimension": "Fluency", "score": 5, "rater_id": "r1"})
        assert ok.status_code == 200
        bad = client.post("/ratings", json={
            "session_id": "s1", "dimension": "Fluency", "score": 7, "rater_id": "r1"})
        assert bad.status_code == 400
        client.post("/ratings", json={
            "session_id": "s2", "dimension": "Professionalism", "score": 3, "rater_id": "r2"})
        doc = client.get("/ratings").json()
    assert doc["aggregate"]["Fluency"] == 5.0
    assert doc["aggregate"]["Professionalism"] == 3.0
    assert ["Professionalism", 3.0] in doc["radar"]


def test_eight_concurrent_ws_sessions(fixture_graph):
    # Small nonzero pacing so the eight sessions genuinely overlap.
    config = parse_config(
        {"backends": {"pacing": {"asr_rtf": 0.001, "llm_rate": 400.0,
                                 "tts_rtf": 0.01, "frame_cost": 0.0002},
                      "char_duration": 0.05}},
        env={},
    )
    app = create_app(config, graph=fixture_graph)
    queries = [
        "黄河从哪里发源？", "禹治水的事迹如何？", "水经注记载了什么？", "潘季驯如何治河？",
        "黄河决口在何处？", "龙门在哪里？", "都水监掌什么？", "堤防如何修筑？",
    ]
    results = {}
    errors = []

    def run_one(i, query):
        try:
            with client.websocket_connect("/session") as ws:
                ws.receive_json()
                ws.send_json({"query_text": query})
                results[i] = read_response(ws)
        except Exception as exc:  # pragma: no cover
            errors.append((i, exc))

    with TestClient(app) as client:
        threads = [threading.Thread(target=run_one, args=(i, q)) for i, q in enumerate(queries)]
        for t in threads:
            t.start()
        for t in threads:
            t.join(timeout=60)

    assert not errors
    assert len(results) == 8
    for i, events in results.items():
        types = [e["type"] for e in events]
        assert types[-1] == "end"
        assert [e["seq"] for e in events] == list(range(len(events)))
        tokens = "".join(e["payload"]["text"] for e in events if e["type"] == "token")
        sentences = "".join(e["payload"]["text"] for e in events if e["type"] == "sentence")
        assert tokens == sentences and len(tokens) > 0
        # The answer restates this session's own query (no cross-session leakage).
        core = queries[i].rstrip("？")
        assert core in tokens


def test_metrics_retention_ring(fixture_graph):
    from voicerag.gateway.server import GatewayState
    from voicerag.pipeline import ModuleMetrics

    config = parse_config({"metrics_retention": 2}, env={})
    state = GatewayState(config=config, graph=fixture_graph)
    for i in range(3):
        state.record_session_metrics(f"s{i}", ModuleMetrics(None, float(i), None, None))
    doc = state.metrics_document()
    assert [s["session_id"] for s in doc["sessions"]] == ["s1", "s2"]
    assert doc["aggregate"]["llm_tokens_per_second"] == pytest.approx(1.5)
