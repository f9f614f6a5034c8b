"""HTTP/WebSocket gateway.

`/session` streams WireEvents for one request at a time per connection
(text query or binary audio frames terminated by {"audio_end": true});
`/metrics` serves per-session module metrics with aggregate means;
`/ratings` ingests and aggregates subjective ratings; the console bundle
is served from the configured static directory.
"""

from __future__ import annotations

import asyncio
import json
import threading
import uuid
from collections import deque
from dataclasses import dataclass, field

from fastapi import FastAPI, Request, WebSocket, WebSocketDisconnect
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from ..backends import remote_backend_set, stub_backend_set
from ..backends.base import BackendSet
from ..errors import RatingInvalidError
from ..graph.model import KnowledgeGraph
from ..graph.storage import load_graph
from ..pipeline.events import End, ModuleMetrics
from ..pipeline.metrics import compute_module_metrics
from ..pipeline.session import DialogueSession
from .config import ServerConfig
from .ratings import RatingRecord, aggregate_ratings, radar_export, validate_rating
from .wire import HELLO, encode_event

_STREAM_DONE = object()

METRIC_FIELDS = (
    "asr_time_per_audio_second",
    "llm_tokens_per_second",
    "tts_time_per_audio_second",
    "frame_drive_time",
)


@dataclass
class GatewayState:
    config: ServerConfig
    graph: KnowledgeGraph
    metrics_ring: deque = field(default_factory=deque)
    ratings: list[RatingRecord] = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)

    def make_backends(self) -> BackendSet:
        backend_config = self.config.backends
        if backend_config.mode == "remote":
            return remote_backend_set(
                backend_config.remote,
                sample_rate=self.config.pipeline.sample_rate,
                fps=self.config.pipeline.target_fps,
            )
        return stub_backend_set(
            pacing=backend_config.pacing,
            sample_rate=self.config.pipeline.sample_rate,
            fps=self.config.pipeline.target_fps,
            char_duration=backend_config.char_duration,
        )

    def record_session_metrics(self, session_id: str, metrics: ModuleMetrics) -> None:
        with self.lock:
            self.metrics_ring.append({"session_id": session_id, **{
                name: getattr(metrics, name) for name in METRIC_FIELDS
            }})
            while len(self.metrics_ring) > self.config.metrics_retention:
                self.metrics_ring.popleft()

    def metrics_document(self) -> dict:
        with self.lock:
            sessions = list(self.metrics_ring)
        document: dict = {"sessions": sessions}
        aggregate = {}
        for name in METRIC_FIELDS:
            values = [s[name] for s in sessions if s[name] is not None]
            if values:
                aggregate[name] = sum(values) / len(values)
        if aggregate:
            document["aggregate"] = aggregate
        return document


def create_app(config: ServerConfig, graph: KnowledgeGraph | None = None) -> FastAPI:
    if graph is None:
        graph = load_graph(config.graph_path) if config.graph_path else KnowledgeGraph()
    state = GatewayState(config=config, graph=graph)
    app = FastAPI(title="voicerag gateway")
    app.state.gateway = state

    if config.cors_allow_origins:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=config.cors_allow_origins,
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.get("/metrics")
    def metrics() -> JSONResponse:
        return JSONResponse(state.metrics_document())

    @app.post("/ratings")
    async def post_rating(request: Request) -> JSONResponse:
        try:
            record = validate_rating(await request.json())
        except RatingInvalidError as exc:
            return JSONResponse({"error": str(exc)}, status_code=400)
        except Exception:
            return JSONResponse({"error": "body must be a JSON object"}, status_code=400)
        with state.lock:
            state.ratings.append(record)
            count = len(state.ratings)
        return JSONResponse({"status": "ok", "count": count})

    @app.get("/ratings")
    def get_ratings() -> JSONResponse:
        with state.lock:
            records = list(state.ratings)
        aggregate = aggregate_ratings(records)
        return JSONResponse(
            {
                "count": len(records),
                "aggregate": {dim.value: mean for dim, mean in aggregate.items()},
                "radar": radar_export(aggregate),
            }
        )

    @app.websocket("/session")
    async def session_endpoint(ws: WebSocket) -> None:
        await ws.accept()
        await ws.send_json(HELLO)
        try:
            while True:
                request = await _receive_request(ws)
                if request is None:
                    return
                kind, payload = request
                await _stream_session(ws, state, kind, payload)
        except WebSocketDisconnect:
            return

    if config.static_dir:
        app.mount("/", StaticFiles(directory=config.static_dir, html=True), name="console")

    return app


async def _receive_request(ws: WebSocket):
    """One request: {"query_text": ...} or binary frames + {"audio_end": true}.

    Returns ("text", str) | ("audio", bytes) | None on disconnect. Malformed
    requests produce an error event and close the connection.
    """
    audio = bytearray()
    while True:
        message = await ws.receive()
        if message["type"] == "websocket.disconnect":
            return None
        if message.get("bytes") is not None:
            audio.extend(message["bytes"])
            continue
        text = message.get("text")
        if not text:
            continue
        try:
            request = json.loads(text)
            if not isinstance(request, dict):
                raise ValueError("request must be an object")
        except ValueError:
            await _close_with_error(ws, "malformed request: not a JSON object")
            return None
        if request.get("audio_end"):
            if not audio:
                await _close_with_error(ws, "audio_end received with no audio frames")
                return None
            return ("audio", bytes(audio))
        if isinstance(request.get("query_text"), str) and request["query_text"].strip():
            return ("text", request["query_text"])
        await _close_with_error(ws, "request needs query_text or audio frames + audio_end")
        return None


async def _close_with_error(ws: WebSocket, message: str) -> None:
    await ws.send_json({"type": "error", "seq": 0, "payload": {"stage": "gateway", "message": message}})
    await ws.close()


async def _stream_session(ws: WebSocket, state: GatewayState, kind: str, payload) -> None:
    session_id = uuid.uuid4().hex
    session = DialogueSession(state.make_backends(), state.graph, state.config.pipeline)
    loop = asyncio.get_running_loop()
    outbox: asyncio.Queue = asyncio.Queue()

    def pump() -> None:
        try:
            stream = session.run(text=payload) if kind == "text" else session.run(audio=payload)
            for event in stream:
                loop.call_soon_threadsafe(outbox.put_nowait, event)
        finally:
            loop.call_soon_threadsafe(outbox.put_nowait, _STREAM_DONE)

    worker = threading.Thread(target=pump, daemon=True)
    worker.start()

    seq = 0
    ended = False
    try:
        while True:
            event = await outbox.get()
            if event is _STREAM_DONE:
                break
            await ws.send_json(encode_event(event, seq, state.graph).as_dict())
            seq += 1
            if isinstance(event, End):
                ended = True
    finally:
        session.cancel()
    if ended:
        state.record_session_metrics(
            session_id, compute_module_metrics(session.trace, partial=True)
        )
