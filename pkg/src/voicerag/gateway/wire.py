"""Wire protocol: JSON envelopes carrying stage events over the WebSocket.

One WireEvent per StageEvent, `seq` strictly increasing within a logical
response (each request on a connection starts a fresh seq space). Audio
payloads are base64 PCM. The handshake advertises protocol "v1".
"""

from __future__ import annotations

import base64
from dataclasses import asdict, dataclass

from ..graph.model import KnowledgeGraph
from ..pipeline.events import (
    AudioBlock,
    ContextReady,
    End,
    Error,
    Metrics,
    StageEvent,
    Sentence,
    Token,
    TranscriptFinal,
    VideoFrame,
)

PROTOCOL_VERSION = "v1"

HELLO = {"type": "hello", "protocol": PROTOCOL_VERSION}


@dataclass
class WireEvent:
    type: str
    seq: int
    payload: dict

    def as_dict(self) -> dict:
        return asdict(self)


def encode_event(event: StageEvent, seq: int, graph: KnowledgeGraph | None = None) -> WireEvent:
    if isinstance(event, TranscriptFinal):
        return WireEvent("transcript", seq, {"text": event.text})
    if isinstance(event, ContextReady):
        chunks = []
        for chunk_id, score in event.context.chunks:
            entry = {"chunk_id": chunk_id, "score": score}
            chunk = graph.chunk_index.get(chunk_id) if graph else None
            if chunk is not None:
                entry.update(
                    book_title=chunk.basic.book_title,
                    page_number=chunk.basic.page_number,
                    text=chunk.basic.original_text,
                )
            chunks.append(entry)
        payload = {
            "keywords": list(event.context.keywords_used),
            "entities": [
                {
                    "entity_id": e.entity_id,
                    "canonical_name": e.canonical_name,
                    "entity_type": e.entity_type.value,
                }
                for e in event.context.matched_entities
            ],
            "edges": [
                {
                    "subject_id": e.subject_id,
                    "predicate": e.predicate,
                    "object_id": e.object_id,
                }
                for e in event.context.matched_edges
            ],
            "chunks": chunks,
        }
        return WireEvent("context", seq, payload)
    if isinstance(event, Token):
        return WireEvent("token", seq, {"text": event.text, "seq": event.seq})
    if isinstance(event, Sentence):
        return WireEvent("sentence", seq, {"text": event.text, "seq": event.seq})
    if isinstance(event, AudioBlock):
        return WireEvent(
            "audio",
            seq,
            {
                "data_b64": base64.b64encode(event.samples).decode("ascii"),
                "sample_rate": event.sample_rate,
                "seq": event.seq,
                "sentence_seq": event.sentence_seq,
            },
        )
    if isinstance(event, VideoFrame):
        return WireEvent(
            "frame",
            seq,
            {
                "frame_index": event.frame_index,
                "presentation_time": event.presentation_time,
                "sentence_seq": event.sentence_seq,
            },
        )
    if isinstance(event, Metrics):
        m = event.metrics
        return WireEvent(
            "metrics",
            seq,
            {
                "asr_time_per_audio_second": m.asr_time_per_audio_second,
                "llm_tokens_per_second": m.llm_tokens_per_second,
                "tts_time_per_audio_second": m.tts_time_per_audio_second,
                "frame_drive_time": m.frame_drive_time,
            },
        )
    if isinstance(event, End):
        return WireEvent("end", seq, {})
    if isinstance(event, Error):
        return WireEvent("error", seq, {"stage": event.stage, "message": event.message})
    raise TypeError(f"cannot encode event of type {type(event).__name__}")


def decode_wire_event(record: dict) -> WireEvent:
    return WireEvent(type=record["type"], seq=record["seq"], payload=record.get("payload", {}))


def decode_audio_payload(payload: dict) -> bytes:
    return base64.b64decode(payload["data_b64"])
