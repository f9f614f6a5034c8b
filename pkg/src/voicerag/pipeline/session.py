"""Streaming session orchestration.

Stage workers (ASR+retrieval+LLM controller, sentence accumulator, TTS,
renderer) run as threads connected by bounded single-producer
single-consumer queues; a full queue blocks its producer (backpressure).
Every event is published to the session's output stream the moment the
producing stage creates it, so downstream stage events interleave with
upstream ones. The first stage failure emits one Error event, cancels the
other stages, and the session still terminates with exactly one End.
"""

from __future__ import annotations

import queue
import threading
import time
from typing import Iterator

from ..backends.base import BackendSet
from ..backends.wavtag import read_tagged_wav
from ..graph.model import KnowledgeGraph
from ..graph.retrieval import format_context_prompt, retrieve_context
from .events import (
    AudioBlock,
    ContextReady,
    End,
    Error,
    Metrics,
    PipelineConfig,
    SessionTrace,
    StageEvent,
    Sentence,
    Token,
    TranscriptFinal,
    VideoFrame,
)
from .metrics import compute_module_metrics
from .sentences import SentenceAccumulator

_DONE = object()
_CANCELLED = object()
_POLL = 0.05


class DialogueSession:
    """One spoken or typed exchange through the full pipeline."""

    def __init__(self, backends: BackendSet, graph: KnowledgeGraph, config: PipelineConfig):
        self.backends = backends
        self.graph = graph
        self.config = config
        self.trace = SessionTrace()
        self._cancel = threading.Event()
        self._fail_lock = threading.Lock()
        self._failed = False
        self._started = False
        self._out: queue.Queue = queue.Queue(maxsize=config.queue_capacity)
        self._q_tokens: queue.Queue = queue.Queue(maxsize=config.queue_capacity)
        self._q_sentences: queue.Queue = queue.Queue(maxsize=config.queue_capacity)
        self._q_audio: queue.Queue = queue.Queue(maxsize=config.queue_capacity)

    # -- plumbing ---------------------------------------------------------

    def _emit(self, event: StageEvent) -> None:
        """Publish to the output stream (records into the trace first)."""
        if self._failed and not isinstance(event, (Error, End)):
            return  # a failed session emits nothing after its Error
        self.trace.record_event(event)
        blocked = False
        while True:
            try:
                if blocked:
                    self._out.put(event, timeout=_POLL)
                else:
                    self._out.put_nowait(event)
                return
            except queue.Full:
                if not blocked:
                    blocked = True
                    self.trace.note_queue_blocked("out")
                if self._cancel.is_set() and not isinstance(event, (Error, End)):
                    return

    def _forward(self, q: queue.Queue, name: str, item) -> bool:
        """Bounded put honoring cancellation; False means the session died."""
        blocked = False
        while not self._cancel.is_set():
            try:
                if blocked:
                    q.put(item, timeout=_POLL)
                else:
                    q.put_nowait(item)
            except queue.Full:
                if not blocked:
                    blocked = True
                    self.trace.note_queue_blocked(name)
                continue
            self.trace.note_queue_depth(name, q.qsize())
            return True
        return False

    def _take(self, q: queue.Queue):
        while not self._cancel.is_set():
            try:
                return q.get(timeout=_POLL)
            except queue.Empty:
                continue
        return _CANCELLED

    def _fail(self, stage: str, exc: Exception) -> None:
        with self._fail_lock:
            if self._failed:
                return
            self._failed = True
        self._emit(Error(stage=stage, message=str(exc)))
        self._cancel.set()

    def cancel(self) -> None:
        self._cancel.set()

    # -- stage workers ----------------------------------------------------

    def _controller(self, query_text: str | None, audio: bytes | None) -> None:
        """ASR (one-shot) → retrieval → prompt → LLM token stream."""
        stage = "asr"
        try:
            if audio is not None:
                self.trace.input_audio_seconds = read_tagged_wav(audio).duration_seconds
                t0 = time.monotonic()
                text = self.backends.asr.transcribe(audio)
                self.trace.add_stage_time("asr", time.monotonic() - t0)
                self._emit(TranscriptFinal(text))
            else:
                text = query_text or ""

            stage = "retrieval"
            context = retrieve_context(
                self.graph, text, k=self.config.retrieval_k, depth=self.config.retrieval_depth
            )
            self._emit(ContextReady(context))
            prompt = format_context_prompt(
                context, text, self.config.prompt_budget_chars, self.graph
            )

            stage = "llm"
            self.trace.llm_first_request_ts = time.monotonic()
            stream = self.backends.llm.stream(prompt)
            seq = 0
            while not self._cancel.is_set():
                token_text = next(stream, _DONE)
                if token_text is _DONE:
                    break
                event = Token(text=token_text, seq=seq)
                seq += 1
                self._emit(event)
                if not self._forward(self._q_tokens, "tokens", event):
                    return
            self._forward(self._q_tokens, "tokens", _DONE)
        except Exception as exc:
            self._fail(stage, exc)

    def _accumulator_worker(self) -> None:
        acc = SentenceAccumulator(self.config.sentence_punctuation)
        seq = 0

        def emit_sentence(text: str) -> bool:
            nonlocal seq
            event = Sentence(text=text, seq=seq)
            seq += 1
            self._emit(event)
            return self._forward(self._q_sentences, "sentences", event)

        try:
            while True:
                item = self._take(self._q_tokens)
                if item is _CANCELLED:
                    return
                if item is _DONE:
                    residue = acc.flush()
                    if residue is not None and not emit_sentence(residue):
                        return
                    break
                for sentence_text in acc.feed(item.text):
                    if not emit_sentence(sentence_text):
                        return
            self._forward(self._q_sentences, "sentences", _DONE)
        except Exception as exc:
            self._fail("accumulator", exc)

    def _tts_worker(self) -> None:
        audio_seq = 0
        try:
            while True:
                item = self._take(self._q_sentences)
                if item is _CANCELLED:
                    return
                if item is _DONE:
                    break
                synth = self.backends.tts.synthesize(item.text)
                while not self._cancel.is_set():
                    t0 = time.monotonic()
                    block = next(synth, _DONE)
                    self.trace.add_stage_time("tts", time.monotonic() - t0)
                    if block is _DONE:
                        break
                    event = AudioBlock(
                        samples=block,
                        sample_rate=self.config.sample_rate,
                        seq=audio_seq,
                        sentence_seq=item.seq,
                    )
                    audio_seq += 1
                    self._emit(event)
                    if not self._forward(self._q_audio, "audio", event):
                        return
            self._forward(self._q_audio, "audio", _DONE)
        except Exception as exc:
            self._fail("tts", exc)

    def _render_worker(self) -> None:
        fps = self.config.target_fps
        last_sentence_seq = 0

        def consume(pcm: bytes | None, sentence_seq: int) -> None:
            frames = self.backends.renderer.drive(pcm, self.config.sample_rate)
            while not self._cancel.is_set():
                t0 = time.monotonic()
                index = next(frames, _DONE)
                self.trace.add_stage_time("render", time.monotonic() - t0)
                if index is _DONE:
                    return
                self._emit(
                    VideoFrame(
                        frame_index=index,
                        presentation_time=index / fps,
                        sentence_seq=sentence_seq,
                    )
                )

        try:
            while True:
                item = self._take(self._q_audio)
                if item is _CANCELLED:
                    return
                if item is _DONE:
                    consume(None, last_sentence_seq)  # flush partial frame
                    break
                last_sentence_seq = item.sentence_seq
                consume(item.samples, item.sentence_seq)
        except Exception as exc:
            self._fail("render", exc)

    # -- public API -------------------------------------------------------

    def run(self, *, text: str | None = None, audio: bytes | None = None) -> Iterator[StageEvent]:
        """Start the pipeline and stream its events; End is always last."""
        if self._started:
            raise RuntimeError("DialogueSession.run is single-use; create a new session")
        if (text is None) == (audio is None):
            raise ValueError("provide exactly one of text= or audio=")
        self._started = True

        workers = [
            threading.Thread(target=self._controller, args=(text, audio), daemon=True),
            threading.Thread(target=self._accumulator_worker, daemon=True),
            threading.Thread(target=self._tts_worker, daemon=True),
            threading.Thread(target=self._render_worker, daemon=True),
        ]

        def supervise() -> None:
            for worker in workers:
                worker.start()
            for worker in workers:
                worker.join()
            if not self._failed:
                self._emit(Metrics(compute_module_metrics(self.trace, partial=True)))
            self._emit(End())
            self._out.put(_DONE)

        supervisor = threading.Thread(target=supervise, daemon=True)
        supervisor.start()

        try:
            while True:
                item = self._out.get()
                if item is _DONE:
                    break
                yield item
        finally:
            # Abandoned consumer: cancel and unblock the workers.
            self._cancel.set()
            while supervisor.is_alive():
                try:
                    while True:
                        self._out.get_nowait()
                except queue.Empty:
                    pass
                supervisor.join(timeout=_POLL)


def run_session(
    query: str | bytes,
    backends: BackendSet,
    graph: KnowledgeGraph,
    config: PipelineConfig | None = None,
) -> Iterator[StageEvent]:
    """Convenience wrapper: bytes run through ASR, text skips straight to
    retrieval."""
    config = config or PipelineConfig()
    session = DialogueSession(backends, graph, config)
    if isinstance(query, bytes):
        return session.run(audio=query)
    return session.run(text=query)
