"""Stage events, pipeline configuration, metrics and session trace."""

from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

from ..graph.retrieval import RetrievalContext

DEFAULT_SENTENCE_PUNCTUATION = frozenset("。！？…!?.")


def _now() -> float:
    return time.monotonic()


@dataclass
class TranscriptFinal:
    text: str
    ts: float = field(default_factory=_now, compare=False, kw_only=True)


@dataclass
class ContextReady:
    context: RetrievalContext
    ts: float = field(default_factory=_now, compare=False, kw_only=True)


@dataclass
class Token:
    text: str
    seq: int
    ts: float = field(default_factory=_now, compare=False, kw_only=True)


@dataclass
class Sentence:
    text: str
    seq: int
    ts: float = field(default_factory=_now, compare=False, kw_only=True)


@dataclass
class AudioBlock:
    samples: bytes  # int16 little-endian PCM
    sample_rate: int
    seq: int
    sentence_seq: int
    ts: float = field(default_factory=_now, compare=False, kw_only=True)


@dataclass
class VideoFrame:
    frame_index: int
    presentation_time: float
    sentence_seq: int
    ts: float = field(default_factory=_now, compare=False, kw_only=True)


@dataclass
class ModuleMetrics:
    asr_time_per_audio_second: float | None = None
    llm_tokens_per_second: float | None = None
    tts_time_per_audio_second: float | None = None
    frame_drive_time: float | None = None


@dataclass
class Metrics:
    metrics: ModuleMetrics
    ts: float = field(default_factory=_now, compare=False, kw_only=True)


@dataclass
class End:
    ts: float = field(default_factory=_now, compare=False, kw_only=True)


@dataclass
class Error:
    stage: str
    message: str
    ts: float = field(default_factory=_now, compare=False, kw_only=True)


StageEvent = (
    TranscriptFinal
    | ContextReady
    | Token
    | Sentence
    | AudioBlock
    | VideoFrame
    | Metrics
    | End
    | Error
)


@dataclass
class PipelineConfig:
    sentence_punctuation: frozenset[str] = DEFAULT_SENTENCE_PUNCTUATION
    sample_rate: int = 16000
    target_fps: int = 25
    queue_capacity: int = 64
    retrieval_k: int = 5
    retrieval_depth: int = 1
    prompt_budget_chars: int = 4000

    def __post_init__(self) -> None:
        if self.sample_rate <= 0:
            raise ValueError("sample_rate must be > 0")
        if self.target_fps <= 0:
            raise ValueError("target_fps must be > 0")
        if self.queue_capacity < 1:
            raise ValueError("queue_capacity must be >= 1")
        if not self.sentence_punctuation:
            raise ValueError("sentence_punctuation must be nonempty")
        self.sentence_punctuation = frozenset(self.sentence_punctuation)


class SessionTrace:
    """Thread-safe per-session bookkeeping: event log, stage active times,
    counts, and inter-stage queue observations."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self.events: list[tuple[float, str, dict]] = []
        self.started_ts = _now()
        self.ended = False
        self.input_audio_seconds = 0.0
        self.output_audio_samples = 0
        self.sample_rate = 0
        self.token_count = 0
        self.sentence_count = 0
        self.frame_count = 0
        self.asr_active = 0.0
        self.tts_active = 0.0
        self.render_active = 0.0
        self.llm_first_request_ts: float | None = None
        self.llm_last_token_ts: float | None = None
        self.queue_high_water: dict[str, int] = {}
        self.queue_blocked: dict[str, int] = {}

    @property
    def output_audio_seconds(self) -> float:
        return self.output_audio_samples / self.sample_rate if self.sample_rate else 0.0

    def record_event(self, event: StageEvent) -> None:
        name = type(event).__name__
        detail: dict = {}
        if isinstance(event, (Token, Sentence)):
            detail = {"seq": event.seq, "chars": len(event.text)}
        elif isinstance(event, AudioBlock):
            detail = {"seq": event.seq, "sentence_seq": event.sentence_seq,
                      "samples": len(event.samples) // 2}
        elif isinstance(event, VideoFrame):
            detail = {"frame_index": event.frame_index, "sentence_seq": event.sentence_seq}
        elif isinstance(event, Error):
            detail = {"stage": event.stage, "message": event.message}
        with self._lock:
            self.events.append((event.ts, name, detail))
            if isinstance(event, Token):
                self.token_count += 1
                self.llm_last_token_ts = event.ts
            elif isinstance(event, Sentence):
                self.sentence_count += 1
            elif isinstance(event, AudioBlock):
                self.output_audio_samples += len(event.samples) // 2
                self.sample_rate = event.sample_rate
            elif isinstance(event, VideoFrame):
                self.frame_count += 1
            elif isinstance(event, End):
                self.ended = True

    def add_stage_time(self, stage: str, seconds: float) -> None:
        with self._lock:
            if stage == "asr":
                self.asr_active += seconds
            elif stage == "tts":
                self.tts_active += seconds
            elif stage == "render":
                self.render_active += seconds

    def note_queue_depth(self, name: str, depth: int) -> None:
        with self._lock:
            if depth > self.queue_high_water.get(name, 0):
                self.queue_high_water[name] = depth

    def note_queue_blocked(self, name: str) -> None:
        with self._lock:
            self.queue_blocked[name] = self.queue_blocked.get(name, 0) + 1

    def export_jsonl(self, path: str | Path) -> None:
        """Line-delimited event log with monotonic timestamps."""
        with open(path, "w", encoding="utf-8") as fh:
            for ts, name, detail in self.events:
                fh.write(json.dumps({"ts": ts, "type": name, **detail}, ensure_ascii=False))
                fh.write("\n")
