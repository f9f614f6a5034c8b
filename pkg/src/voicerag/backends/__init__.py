"""Stage backends: deterministic paced stubs plus remote JSON clients."""

from .base import ASRBackend, BackendSet, LLMBackend, RenderBackend, StubPacing, TTSBackend
from .remote import (
    RemoteASR,
    RemoteEndpoints,
    RemoteLLM,
    RemoteRenderer,
    RemoteStructurer,
    RemoteTTS,
)
from .stubs import (
    BLOCK_SECONDS,
    DEFAULT_CHAR_DURATION,
    StubASR,
    StubLLM,
    StubRenderer,
    StubTTS,
    compose_stub_answer,
)
from .wavtag import TaggedWav, make_fixture_wav, read_tagged_wav, write_tagged_wav


def stub_backend_set(
    pacing: StubPacing | None = None,
    sample_rate: int = 16000,
    fps: int = 25,
    char_duration: float = DEFAULT_CHAR_DURATION,
    fail_tts_on_sentence: int | None = None,
) -> BackendSet:
    """A fresh per-session bundle of stub backends sharing one pacing."""
    from ..fixtures import default_structurer

    pacing = pacing or StubPacing()
    return BackendSet(
        asr=StubASR(pacing),
        llm=StubLLM(pacing),
        tts=StubTTS(pacing, sample_rate=sample_rate, char_duration=char_duration,
                    fail_on_sentence=fail_tts_on_sentence),
        renderer=StubRenderer(pacing, fps=fps),
        structurer=default_structurer(),
        mode="stub",
        pacing=pacing,
    )


def remote_backend_set(endpoints: RemoteEndpoints, sample_rate: int = 16000, fps: int = 25) -> BackendSet:
    return BackendSet(
        asr=RemoteASR(endpoints),
        llm=RemoteLLM(endpoints),
        tts=RemoteTTS(endpoints, sample_rate=sample_rate),
        renderer=RemoteRenderer(endpoints, fps=fps),
        structurer=RemoteStructurer(endpoints),
        mode="remote",
    )


__all__ = [
    "ASRBackend",
    "BLOCK_SECONDS",
    "BackendSet",
    "DEFAULT_CHAR_DURATION",
    "LLMBackend",
    "RemoteASR",
    "RemoteEndpoints",
    "RemoteLLM",
    "RemoteRenderer",
    "RemoteStructurer",
    "RemoteTTS",
    "RenderBackend",
    "StubASR",
    "StubLLM",
    "StubPacing",
    "StubRenderer",
    "StubTTS",
    "TTSBackend",
    "TaggedWav",
    "compose_stub_answer",
    "make_fixture_wav",
    "read_tagged_wav",
    "stub_backend_set",
    "write_tagged_wav",
]
