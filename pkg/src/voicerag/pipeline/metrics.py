"""Per-stage module metrics from a completed session trace."""

from __future__ import annotations

from ..errors import MetricUndefinedError
from .events import ModuleMetrics, SessionTrace


def compute_module_metrics(trace: SessionTrace, partial: bool = False) -> ModuleMetrics:
    """The four measurements: ASR seconds per input-audio second, LLM tokens
    per second (tokens / (last token - first request)), TTS seconds per
    output-audio second, render seconds per frame.

    A zero denominator raises MetricUndefined naming the field; with
    partial=True the field is left None instead (text-query sessions have
    no input audio, so the orchestrator uses the partial form).
    """
    metrics = ModuleMetrics()

    if trace.input_audio_seconds > 0:
        metrics.asr_time_per_audio_second = trace.asr_active / trace.input_audio_seconds
    elif not partial:
        raise MetricUndefinedError("asr_time_per_audio_second")

    llm_wall = None
    if trace.llm_first_request_ts is not None and trace.llm_last_token_ts is not None:
        llm_wall = trace.llm_last_token_ts - trace.llm_first_request_ts
    if trace.token_count > 0 and llm_wall and llm_wall > 0:
        metrics.llm_tokens_per_second = trace.token_count / llm_wall
    elif not partial:
        raise MetricUndefinedError("llm_tokens_per_second")

    if trace.output_audio_seconds > 0:
        metrics.tts_time_per_audio_second = trace.tts_active / trace.output_audio_seconds
    elif not partial:
        raise MetricUndefinedError("tts_time_per_audio_second")

    if trace.frame_count > 0:
        metrics.frame_drive_time = trace.render_active / trace.frame_count
    elif not partial:
        raise MetricUndefinedError("frame_drive_time")

    return metrics
