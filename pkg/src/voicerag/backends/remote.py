"""Remote stage clients.

The wire protocol is this artifact's own JSON schema per stage (documented
in the README), not any vendor API; adapters for real services belong in
front of these endpoints. Each call enforces a timeout and retries once
with exponential backoff. Failures map onto the three stage error types,
which the pipeline converts into Error events.
"""

from __future__ import annotations

import base64
import json
import time
from dataclasses import dataclass
from typing import Iterator

import requests

from ..corpus.models import EntityMention, EntityType, RelationMention
from ..corpus.structuring import StructuredDraft
from ..errors import MalformedResponseError, StageTimeoutError, StageUnreachableError

RETRY_BACKOFF_SECONDS = 0.2


@dataclass
class RemoteEndpoints:
    asr_url: str = ""
    llm_url: str = ""
    tts_url: str = ""
    render_url: str = ""
    structurer_url: str = ""
    timeout: float = 10.0
    voice: str = ""  # forwarded to the TTS service when set


def _post(stage: str, url: str, payload: dict, timeout: float, stream: bool = False):
    last_exc: Exception | None = None
    for attempt in range(2):
        if attempt:
            time.sleep(RETRY_BACKOFF_SECONDS * (2 ** (attempt - 1)))
        try:
            response = requests.post(url, json=payload, timeout=timeout, stream=stream)
            response.raise_for_status()
            return response
        except requests.Timeout as exc:
            last_exc = StageTimeoutError(stage)
            last_exc.__cause__ = exc
        except requests.ConnectionError as exc:
            last_exc = StageUnreachableError(stage)
            last_exc.__cause__ = exc
        except requests.HTTPError as exc:
            last_exc = MalformedResponseError(stage, f"HTTP {exc.response.status_code}")
            last_exc.__cause__ = exc
    raise last_exc


def _json_body(stage: str, response) -> dict:
    try:
        body = response.json()
    except ValueError as exc:
        raise MalformedResponseError(stage, "body is not JSON") from exc
    if not isinstance(body, dict):
        raise MalformedResponseError(stage, "body is not an object")
    return body


class RemoteASR:
    def __init__(self, endpoints: RemoteEndpoints):
        self.endpoints = endpoints

    def transcribe(self, audio: bytes) -> str:
        payload = {"audio_b64": base64.b64encode(audio).decode("ascii")}
        body = _json_body("asr", _post("asr", self.endpoints.asr_url, payload, self.endpoints.timeout))
        text = body.get("text")
        if not isinstance(text, str):
            raise MalformedResponseError("asr", "missing text field")
        return text


class RemoteLLM:
    """Consumes a newline-delimited token stream incrementally."""

    def __init__(self, endpoints: RemoteEndpoints):
        self.endpoints = endpoints

    def stream(self, prompt: str) -> Iterator[str]:
        response = _post(
            "llm", self.endpoints.llm_url, {"prompt": prompt}, self.endpoints.timeout, stream=True
        )
        done = False
        for line in response.iter_lines(decode_unicode=True):
            if not line:
                continue
            try:
                record = json.loads(line)
            except ValueError as exc:
                raise MalformedResponseError("llm", f"bad stream line: {line[:80]}") from exc
            if record.get("done"):
                done = True
                break
            token = record.get("token")
            if not isinstance(token, str):
                raise MalformedResponseError("llm", "stream record missing token")
            yield token
        if not done:
            raise MalformedResponseError("llm", "stream ended without done record")


class RemoteTTS:
    def __init__(self, endpoints: RemoteEndpoints, sample_rate: int = 16000):
        self.endpoints = endpoints
        self.sample_rate = sample_rate

    def synthesize(self, sentence: str) -> Iterator[bytes]:
        payload = {"text": sentence, "sample_rate": self.sample_rate}
        if self.endpoints.voice:
            payload["voice"] = self.endpoints.voice
        body = _json_body("tts", _post("tts", self.endpoints.tts_url, payload, self.endpoints.timeout))
        audio_b64 = body.get("audio_b64")
        if not isinstance(audio_b64, str):
            raise MalformedResponseError("tts", "missing audio_b64 field")
        try:
            pcm = base64.b64decode(audio_b64, validate=True)
        except Exception as exc:
            raise MalformedResponseError("tts", "audio_b64 is not base64") from exc
        block_bytes = int(0.020 * self.sample_rate) * 2
        for off in range(0, len(pcm), block_bytes):
            yield pcm[off : off + block_bytes]


class RemoteRenderer:
    """The service owns the frame count; the client emits new indices."""

    def __init__(self, endpoints: RemoteEndpoints, fps: int = 25):
        self.endpoints = endpoints
        self.fps = fps
        self._emitted = 0

    def drive(self, pcm_block: bytes | None, sample_rate: int) -> Iterator[int]:
        payload = {
            "pcm_b64": base64.b64encode(pcm_block).decode("ascii") if pcm_block else None,
            "sample_rate": sample_rate,
            "fps": self.fps,
            "flush": pcm_block is None,
        }
        body = _json_body(
            "render", _post("render", self.endpoints.render_url, payload, self.endpoints.timeout)
        )
        total = body.get("frames_total")
        if not isinstance(total, int) or total < self._emitted:
            raise MalformedResponseError("render", "bad frames_total")
        while self._emitted < total:
            index = self._emitted
            self._emitted += 1
            yield index


class RemoteStructurer:
    def __init__(self, endpoints: RemoteEndpoints):
        self.endpoints = endpoints

    def structure(self, text: str) -> StructuredDraft:
        body = _json_body(
            "structurer",
            _post("structurer", self.endpoints.structurer_url, {"text": text}, self.endpoints.timeout),
        )
        try:
            entities = [
                EntityMention(
                    surface=m["surface"],
                    entity_type=_entity_type(m.get("entity_type")),
                )
                for m in body.get("entities", [])
            ]
            relations = [
                RelationMention(r["subject_surface"], r["predicate"], r["object_surface"])
                for r in body.get("relations", [])
            ]
            return StructuredDraft(
                translation=body["translation"],
                summary=body["summary"],
                entities=entities,
                relations=relations,
            )
        except (KeyError, TypeError) as exc:
            raise MalformedResponseError("structurer", str(exc)) from exc


def _entity_type(value) -> EntityType:
    # Remote taxonomies must map into ours; anything unknown becomes Term.
    try:
        return EntityType(value)
    except ValueError:
        return EntityType.Term
