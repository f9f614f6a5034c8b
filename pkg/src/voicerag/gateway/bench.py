"""Benchmark harness: run N stub sessions, report per-module metrics."""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass

from ..backends import make_fixture_wav, stub_backend_set
from ..backends.base import BackendSet, StubPacing
from ..backends.stubs import DEFAULT_CHAR_DURATION
from ..fixtures import FIXTURE_QUERIES
from ..graph.model import KnowledgeGraph
from ..graph.retrieval import format_context_prompt, retrieve_context
from ..pipeline.events import End, Metrics, ModuleMetrics, PipelineConfig
from ..pipeline.sentences import split_sentences
from ..pipeline.session import DialogueSession

TABLE_ROWS = (
    ("ASR", "Time required to recognize 1s audio", "asr_time_per_audio_second", "s"),
    ("LLM (including RAG)", "Tokens generated per second", "llm_tokens_per_second", "tokens/s"),
    ("TTS", "Time required to synthesize 1s audio", "tts_time_per_audio_second", "s"),
    ("Talking-Head Generation", "Time required to drive one frame", "frame_drive_time", "s"),
)


@dataclass
class BenchResult:
    per_session: list[ModuleMetrics]
    means: dict[str, float]

    def table(self) -> str:
        width_module = max(len(r[0]) for r in TABLE_ROWS) + 2
        width_metric = max(len(r[1]) for r in TABLE_ROWS) + 2
        lines = [
            f"{'Module':<{width_module}}{'Processing Metric':<{width_metric}}Measured",
        ]
        for module, metric, field_name, unit in TABLE_ROWS:
            value = self.means.get(field_name)
            shown = f"{value:.5f} {unit}" if value is not None else "n/a"
            if field_name == "llm_tokens_per_second" and value is not None:
                shown = f"{value:.2f} {unit}"
            lines.append(f"{module:<{width_module}}{metric:<{width_metric}}{shown}")
        return "\n".join(lines)


def run_bench(
    graph: KnowledgeGraph,
    sessions: int = 10,
    pacing: StubPacing | None = None,
    config: PipelineConfig | None = None,
    char_duration: float = DEFAULT_CHAR_DURATION,
    audio_seconds: float = 1.0,
) -> BenchResult:
    """N sequential stub sessions over rotating fixture voice queries.

    Audio input keeps every one of the four metrics defined.
    """
    pacing = pacing or StubPacing()
    config = config or PipelineConfig()
    queries = itertools.cycle(FIXTURE_QUERIES)
    collected: list[ModuleMetrics] = []
    for _ in range(sessions):
        wav = make_fixture_wav(next(queries), audio_seconds, config.sample_rate)
        backends = stub_backend_set(
            pacing=pacing,
            sample_rate=config.sample_rate,
            fps=config.target_fps,
            char_duration=char_duration,
        )
        session = DialogueSession(backends, graph, config)
        for event in session.run(audio=wav):
            if isinstance(event, Metrics):
                collected.append(event.metrics)
    means: dict[str, float] = {}
    for _, _, field_name, _ in TABLE_ROWS:
        values = [getattr(m, field_name) for m in collected if getattr(m, field_name) is not None]
        if values:
            means[field_name] = sum(values) / len(values)
    return BenchResult(per_session=collected, means=means)


@dataclass
class StageWallTimes:
    asr: float
    llm: float
    tts: float
    render: float

    @property
    def total(self) -> float:
        return self.asr + self.llm + self.tts + self.render


def measure_isolated_stages(
    graph: KnowledgeGraph,
    wav: bytes,
    backends_factory,
    config: PipelineConfig,
) -> StageWallTimes:
    """Run each stage to completion alone on the same input, timing each.

    The sum of these walls is the no-pipelining baseline a streamed session
    is compared against.
    """
    backends: BackendSet = backends_factory()

    t0 = time.monotonic()
    text = backends.asr.transcribe(wav)
    asr_wall = time.monotonic() - t0

    context = retrieve_context(graph, text, k=config.retrieval_k, depth=config.retrieval_depth)
    prompt = format_context_prompt(context, text, config.prompt_budget_chars, graph)

    t0 = time.monotonic()
    answer = "".join(backends.llm.stream(prompt))
    llm_wall = time.monotonic() - t0

    sentences = split_sentences(answer, config.sentence_punctuation)
    blocks: list[bytes] = []
    t0 = time.monotonic()
    for sentence in sentences:
        blocks.extend(backends.tts.synthesize(sentence))
    tts_wall = time.monotonic() - t0

    t0 = time.monotonic()
    for block in blocks:
        for _ in backends.renderer.drive(block, config.sample_rate):
            pass
    for _ in backends.renderer.drive(None, config.sample_rate):
        pass
    render_wall = time.monotonic() - t0

    return StageWallTimes(asr=asr_wall, llm=llm_wall, tts=tts_wall, render=render_wall)


def run_pipelined_session(
    graph: KnowledgeGraph,
    wav: bytes,
    backends_factory,
    config: PipelineConfig,
):
    """One streamed session; returns (events, wall_seconds, session)."""
    session = DialogueSession(backends_factory(), graph, config)
    t0 = time.monotonic()
    events = list(session.run(audio=wav))
    wall = time.monotonic() - t0
    assert isinstance(events[-1], End)
    return events, wall, session
