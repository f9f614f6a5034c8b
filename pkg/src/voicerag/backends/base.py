"""Stage backend interfaces and the per-session backend bundle."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Protocol

from ..corpus.structuring import Structurer


class ASRBackend(Protocol):
    def transcribe(self, audio: bytes) -> str:
        """One-shot recognition of a tagged WAV byte stream (not streamed)."""


class LLMBackend(Protocol):
    def stream(self, prompt: str) -> Iterator[str]:
        """Yield answer tokens incrementally for a full prompt."""


class TTSBackend(Protocol):
    def synthesize(self, sentence: str) -> Iterator[bytes]:
        """Yield 20 ms int16 PCM blocks for one sentence."""

    sample_rate: int


class RenderBackend(Protocol):
    def drive(self, pcm_block: bytes | None, sample_rate: int) -> Iterator[int]:
        """Consume one audio block (None flushes) and yield due frame indices."""


@dataclass
class StubPacing:
    """Simulated per-stage costs; zero means as fast as possible."""

    asr_rtf: float = 0.01460       # seconds of work per second of input audio
    llm_rate: float = 36.79        # tokens per second
    tts_rtf: float = 0.27448       # seconds of work per second of output audio
    frame_cost: float = 0.0039     # seconds of work per frame

    def __post_init__(self) -> None:
        for name in ("asr_rtf", "llm_rate", "tts_rtf", "frame_cost"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")

    def scaled(self, factor: float) -> "StubPacing":
        """Uniformly faster/slower pacing preserving the stage cost ratios."""
        if factor <= 0:
            raise ValueError("factor must be > 0")
        return StubPacing(
            asr_rtf=self.asr_rtf * factor,
            llm_rate=self.llm_rate / factor,
            tts_rtf=self.tts_rtf * factor,
            frame_cost=self.frame_cost * factor,
        )

    @classmethod
    def unpaced(cls) -> "StubPacing":
        return cls(asr_rtf=0.0, llm_rate=0.0, tts_rtf=0.0, frame_cost=0.0)


@dataclass
class BackendSet:
    asr: ASRBackend
    llm: LLMBackend
    tts: TTSBackend
    renderer: RenderBackend
    structurer: Structurer | None = None
    mode: str = "stub"  # stub | remote
    pacing: StubPacing = field(default_factory=StubPacing)
