"""Remote stage clients against a local mock server."""

import base64
import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest

from voicerag.backends import (
    RemoteASR,
    RemoteEndpoints,
    RemoteLLM,
    RemoteRenderer,
    RemoteStructurer,
    RemoteTTS,
)
from voicerag.corpus import EntityType
from voicerag.errors import MalformedResponseError, StageUnreachableError


class MockHandler(BaseHTTPRequestHandler):
    def log_message(self, *args):
        pass

    def _body(self):
        length = int(self.headers["Content-Length"])
        return json.loads(self.rfile.read(length))

    def _reply(self, payload, status=200):
        body = json.dumps(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def do_POST(self):
        request = self._body()
        if self.path == "/asr":
            # Echo server: decodes the audio and reports its size as text.
            audio = base64.b64decode(request["audio_b64"])
            self._reply({"text": f"echo:{len(audio)}"})
        elif self.path == "/llm":
            self.send_response(200)
            self.send_header("Content-Type", "application/x-ndjson")
            self.end_headers()
            for i in range(50):
                self.wfile.write(json.dumps({"token": f"t{i}"}).encode() + b"\n")
            self.wfile.write(json.dumps({"done": True}).encode() + b"\n")
        elif self.path == "/llm-broken":
            self.send_response(200)
            self.end_headers()
            self.wfile.write(b'{"token": "a"}\n')
            self.wfile.write(b"not json\n")
        elif self.path == "/tts":
            pcm = b"\x01\x00" * 800  # 50 ms at 16 kHz
            self._reply({"audio_b64": base64.b64encode(pcm).decode(), "sample_rate": 16000})
        elif self.path == "/render":
            if request.get("flush"):
                self._reply({"frames_total": MockHandler.frames_total})
            else:
                samples = len(base64.b64decode(request["pcm_b64"])) // 2
                MockHandler.samples += samples
                MockHandler.frames_total = (MockHandler.samples * request["fps"]) // request["sample_rate"]
                self._reply({"frames_total": MockHandler.frames_total})
        elif self.path == "/structure":
            self._reply(
                {
                    "translation": "今译：" + request["text"],
                    "summary": request["text"][:1],
                    "entities": [
                        {"surface": "禹", "entity_type": "Person"},
                        {"surface": "奇物", "entity_type": "UnknownKind"},
                    ],
                    "relations": [],
                }
            )
        elif self.path == "/bad-json":
            self.send_response(200)
            self.send_header("Content-Length", "9")
            self.end_headers()
            self.wfile.write(b"not json!")
        else:
            self._reply({"error": "unknown"}, status=404)


@pytest.fixture(scope="module")
def mock_server():
    MockHandler.samples = 0
    MockHandler.frames_total = 0
    server = ThreadingHTTPServer(("127.0.0.1", 0), MockHandler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{server.server_port}"
    server.shutdown()


def endpoints(base):
    return RemoteEndpoints(
        asr_url=f"{base}/asr",
        llm_url=f"{base}/llm",
        tts_url=f"{base}/tts",
        render_url=f"{base}/render",
        structurer_url=f"{base}/structure",
        timeout=5.0,
    )


def test_asr_loopback(mock_server):
    text = RemoteASR(endpoints(mock_server)).transcribe(b"\x00" * 64)
    assert text == "echo:64"


def test_llm_streams_tokens_in_order(mock_server):
    tokens = list(RemoteLLM(endpoints(mock_server)).stream("问"))
    assert tokens == [f"t{i}" for i in range(50)]


def test_llm_malformed_stream(mock_server):
    eps = endpoints(mock_server)
    eps.llm_url = f"{mock_server}/llm-broken"
    with pytest.raises(MalformedResponseError):
        list(RemoteLLM(eps).stream("问"))


def test_tts_blocks(mock_server):
    blocks = list(RemoteTTS(endpoints(mock_server)).synthesize("河"))
    assert sum(len(b) for b in blocks) == 1600
    assert len(blocks[0]) == 640


def test_renderer_counts_from_service(mock_server):
    renderer = RemoteRenderer(endpoints(mock_server), fps=25)
    frames = list(renderer.drive(b"\x00\x00" * 16000, 16000))
    frames += list(renderer.drive(None, 16000))
    assert frames == list(range(25))


def test_structurer_maps_unknown_type_to_term(mock_server):
    draft = RemoteStructurer(endpoints(mock_server)).structure("禹治河。")
    types = {m.surface: m.entity_type for m in draft.entities}
    assert types["禹"] == EntityType.Person
    assert types["奇物"] == EntityType.Term


def test_unreachable_endpoint():
    eps = RemoteEndpoints(asr_url="http://127.0.0.1:9/asr", timeout=0.5)
    with pytest.raises(StageUnreachableError) as exc:
        RemoteASR(eps).transcribe(b"x")
    assert exc.value.stage == "asr"


def test_malformed_json_body(mock_server):
    eps = endpoints(mock_server)
    eps.asr_url = f"{mock_server}/bad-json"
    with pytest.raises(MalformedResponseError):
        RemoteASR(eps).transcribe(b"x")


def test_pipeline_ordering_holds_with_remote_backends(mock_server):
    """Substitutability: the session's event-ordering postconditions do not
    depend on which implementation backs each stage."""
    from voicerag.backends import make_fixture_wav, remote_backend_set
    from voicerag.fixtures import make_structured_chunks
    from voicerag.graph import build_graph
    from voicerag.pipeline import (
        ContextReady,
        End,
        PipelineConfig,
        Sentence,
        Token,
        TranscriptFinal,
        run_session,
    )

    MockHandler.samples = 0
    MockHandler.frames_total = 0
    graph = build_graph(make_structured_chunks(num_docs=2, sentences_per_doc=8, seed=5))
    backends = remote_backend_set(endpoints(mock_server))
    wav = make_fixture_wav("黄河", 0.25)
    events = list(run_session(wav, backends, graph, PipelineConfig()))

    positions = {}
    for i, e in enumerate(events):
        positions.setdefault(type(e), i)
    assert positions[TranscriptFinal] < positions[ContextReady] < positions[Token]
    assert isinstance(events[-1], End)
    assert sum(1 for e in events if isinstance(e, End)) == 1
    tokens = [e for e in events if isinstance(e, Token)]
    assert [t.seq for t in tokens] == list(range(50))  # mock emits t0..t49
    sentences = [e for e in events if isinstance(e, Sentence)]
    assert "".join(s.text for s in sentences) == "".join(t.text for t in tokens)
