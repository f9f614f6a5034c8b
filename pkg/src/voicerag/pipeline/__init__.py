"""Streaming dialogue pipeline: events, accumulator, orchestrator, metrics."""

from .events import (
    AudioBlock,
    ContextReady,
    DEFAULT_SENTENCE_PUNCTUATION,
    End,
    Error,
    Metrics,
    ModuleMetrics,
    PipelineConfig,
    SessionTrace,
    Sentence,
    StageEvent,
    Token,
    TranscriptFinal,
    VideoFrame,
)
from .metrics import compute_module_metrics
from .sentences import SentenceAccumulator, accumulate_sentences, split_sentences
from .session import DialogueSession, run_session

__all__ = [
    "AudioBlock",
    "ContextReady",
    "DEFAULT_SENTENCE_PUNCTUATION",
    "DialogueSession",
    "End",
    "Error",
    "Metrics",
    "ModuleMetrics",
    "PipelineConfig",
    "SentenceAccumulator",
    "SessionTrace",
    "Sentence",
    "StageEvent",
    "Token",
    "TranscriptFinal",
    "VideoFrame",
    "accumulate_sentences",
    "compute_module_metrics",
    "run_session",
    "split_sentences",
]
