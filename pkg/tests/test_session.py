"""Orchestrator: event ordering, lossless text path, pipelining, faults,
backpressure."""

import itertools

import pytest

from voicerag.backends import (
    BLOCK_SECONDS,
    StubPacing,
    StubTTS,
    make_fixture_wav,
    stub_backend_set,
)
from voicerag.pipeline import (
    AudioBlock,
    ContextReady,
    DialogueSession,
    End,
    Error,
    Metrics,
    PipelineConfig,
    Sentence,
    Token,
    TranscriptFinal,
    VideoFrame,
    run_session,
)


def collect(events):
    by_type = {}
    ordered = list(events)
    for e in ordered:
        by_type.setdefault(type(e), []).append(e)
    return ordered, by_type


def test_text_query_first_event_is_context(fixture_graph, fast_backends, fast_config):
    ordered, by_type = collect(run_session("黄河从哪里发源？", fast_backends, fixture_graph, fast_config))
    assert isinstance(ordered[0], ContextReady)
    assert TranscriptFinal not in by_type
    assert isinstance(ordered[-1], End)
    assert len(by_type[End]) == 1


def test_audio_query_event_causality(fixture_graph, fast_config):
    wav = make_fixture_wav("黄河从哪里发源？", 1.0)
    ordered, by_type = collect(run_session(wav, stub_backend_set(StubPacing.unpaced()), fixture_graph, fast_config))

    transcript = by_type[TranscriptFinal][0]
    assert transcript.text == "黄河从哪里发源？"
    positions = {type(e): i for i, e in reversed(list(enumerate(ordered)))}
    # first occurrence indices via reversed-overwrite trick
    assert positions[TranscriptFinal] < positions[ContextReady] < positions[Token]
    assert isinstance(ordered[-1], End)
    assert isinstance(ordered[-2], Metrics)


def test_lossless_text_path(fixture_graph, fast_backends, fast_config):
    _, by_type = collect(run_session("禹治水的事迹如何？", fast_backends, fixture_graph, fast_config))
    tokens = "".join(t.text for t in by_type[Token])
    sentences = "".join(s.text for s in by_type[Sentence])
    assert sentences == tokens
    assert len(tokens) > 0


def test_seqs_strictly_increasing_per_tag(fixture_graph, fast_backends, fast_config):
    _, by_type = collect(run_session("水经注记载了什么？", fast_backends, fixture_graph, fast_config))
    for cls in (Token, Sentence, AudioBlock):
        seqs = [e.seq for e in by_type[cls]]
        assert seqs == list(range(len(seqs)))
    frames = [f.frame_index for f in by_type[VideoFrame]]
    assert frames == list(range(len(frames)))


def test_audio_accounting_matches_tts_durations(fixture_graph, fast_backends, fast_config):
    _, by_type = collect(run_session("潘季驯如何治河？", fast_backends, fixture_graph, fast_config))
    total_samples = sum(len(b.samples) for b in by_type[AudioBlock]) // 2
    tts = StubTTS(StubPacing.unpaced())
    expected = sum(
        len(tts.render_pcm(s.text)) // 2 for s in by_type[Sentence]
    )
    assert abs(total_samples - expected) <= 1
    assert all(b.sample_rate == fast_config.sample_rate for b in by_type[AudioBlock])


def test_frame_pacing_invariant(fixture_graph, fast_backends, fast_config):
    _, by_type = collect(run_session("黄河决口在何处？", fast_backends, fixture_graph, fast_config))
    frames = by_type[VideoFrame]
    audio_seconds = sum(len(b.samples) for b in by_type[AudioBlock]) / 2 / fast_config.sample_rate
    expected_count = -int(-audio_seconds * fast_config.target_fps // 1)
    assert len(frames) == expected_count
    for f in frames:
        assert f.presentation_time == pytest.approx(f.frame_index / fast_config.target_fps)


def test_audio_interleaves_before_llm_finishes(fixture_graph):
    # Scaled-down pacing keeps the test quick; the interleaving property is
    # scale-free.
    backends = stub_backend_set(StubPacing().scaled(0.25), char_duration=0.1)
    _, by_type = collect(run_session("黄河从哪里发源？", backends, fixture_graph, PipelineConfig()))
    first_audio_ts = by_type[AudioBlock][0].ts
    last_token_ts = by_type[Token][-1].ts
    assert first_audio_ts < last_token_ts


def test_tts_failure_on_second_sentence(fixture_graph, fast_config):
    backends = stub_backend_set(StubPacing.unpaced(), fail_tts_on_sentence=2)
    ordered, by_type = collect(run_session("黄河从哪里发源？", backends, fixture_graph, fast_config))

    errors = by_type[Error]
    assert len(errors) == 1 and errors[0].stage == "tts"
    assert isinstance(ordered[-1], End)
    assert Metrics not in by_type

    # All sentence-1 audio arrived before the error, none for sentence 2.
    blocks = by_type[AudioBlock]
    assert blocks, "sentence 1 audio must be present"
    assert all(b.sentence_seq == 0 for b in blocks)
    first_sentence = by_type[Sentence][0].text
    expected_samples = len(StubTTS(StubPacing.unpaced()).render_pcm(first_sentence)) // 2
    assert sum(len(b.samples) for b in blocks) // 2 == expected_samples
    error_index = ordered.index(errors[0])
    assert all(ordered.index(b) < error_index for b in blocks)


def test_asr_failure_reports_stage(fixture_graph, fast_backends, fast_config):
    session = DialogueSession(fast_backends, fixture_graph, fast_config)
    ordered, by_type = collect(session.run(audio=b"RIFFnope"))
    assert by_type[Error][0].stage == "asr"
    assert isinstance(ordered[-1], End)


def test_bounded_queues_and_backpressure(fixture_graph):
    # Slow TTS with a tiny queue forces the sentence queue to its cap.
    pacing = StubPacing(asr_rtf=0.0, llm_rate=0.0, tts_rtf=0.02, frame_cost=0.0)
    backends = stub_backend_set(pacing, char_duration=0.05)
    config = PipelineConfig(queue_capacity=2)
    session = DialogueSession(backends, fixture_graph, config)
    events = list(session.run(text="黄河从哪里发源？"))
    assert isinstance(events[-1], End)

    trace = session.trace
    assert trace.queue_high_water, "queue depths must be observed"
    assert all(depth <= 2 for depth in trace.queue_high_water.values())
    assert trace.queue_blocked, "backpressure (blocked puts) must be observed"


def test_session_single_use(fixture_graph, fast_backends, fast_config):
    session = DialogueSession(fast_backends, fixture_graph, fast_config)
    list(session.run(text="黄河"))
    with pytest.raises(RuntimeError):
        next(session.run(text="黄河"))


def test_bad_input_combinations(fixture_graph, fast_backends, fast_config):
    session = DialogueSession(fast_backends, fixture_graph, fast_config)
    with pytest.raises(ValueError):
        next(session.run())
    with pytest.raises(ValueError):
        next(DialogueSession(fast_backends, fixture_graph, fast_config).run(text="a", audio=b"b"))


def test_trace_export_jsonl(fixture_graph, fast_backends, fast_config, tmp_path):
    import json

    session = DialogueSession(fast_backends, fixture_graph, fast_config)
    events = list(session.run(text="黄河从哪里发源？"))
    path = tmp_path / "trace.jsonl"
    session.trace.export_jsonl(path)

    records = [json.loads(line) for line in path.read_text(encoding="utf-8").splitlines()]
    assert len(records) == len(events)
    assert all("ts" in r and "type" in r for r in records)
    # Timestamps are monotone within each stage's own event sequence.
    for name in ("Token", "Sentence", "AudioBlock", "VideoFrame"):
        stamps = [r["ts"] for r in records if r["type"] == name]
        assert stamps == sorted(stamps)
    assert records[-1]["type"] == "End"


def test_abandoned_consumer_cancels_cleanly(fixture_graph):
    backends = stub_backend_set(StubPacing().scaled(0.25), char_duration=0.1)
    session = DialogueSession(backends, fixture_graph, PipelineConfig())
    stream = session.run(text="黄河从哪里发源？")
    for _ in zip(range(5), stream):
        pass
    stream.close()  # GeneratorExit → cancellation
    assert session._cancel.is_set()
