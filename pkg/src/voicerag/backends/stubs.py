"""Deterministic paced stub backends.

Every stub produces byte-identical output for identical input; pacing only
shapes *when* results appear. Deadlines are computed against a monotonic
start time so sleep overshoot never accumulates into the measured rates.
"""

from __future__ import annotations

import re
import time
from typing import Iterator

import numpy as np

from ..errors import UnrecognizedAudioError
from .base import StubPacing
from .wavtag import read_tagged_wav

_TERMINALS = "。！？…!?."
_FALLBACK_ANSWER = "请问阁下欲询何事？"
_TITLE_RE = re.compile(r"《([^《》]+)》")
_QUERY_RE = re.compile(r"【问】(.*)")


# Sleep overshoot (scheduler jitter) would otherwise accumulate on
# per-frame pacing, so the last stretch before a deadline is spun.
_SPIN_WINDOW = 0.0015


def _sleep_until(deadline: float) -> None:
    while True:
        remaining = deadline - time.monotonic()
        if remaining <= 0:
            return
        if remaining > _SPIN_WINDOW:
            time.sleep(remaining - 0.001)


class StubASR:
    """Returns the transcript embedded in the fixture WAV's ICMT tag."""

    def __init__(self, pacing: StubPacing | None = None):
        self.pacing = pacing or StubPacing()

    def transcribe(self, audio: bytes) -> str:
        if not audio:
            raise UnrecognizedAudioError("empty audio input")
        wav = read_tagged_wav(audio)
        if not wav.transcript:
            raise UnrecognizedAudioError("fixture carries no transcript tag")
        if self.pacing.asr_rtf > 0:
            _sleep_until(time.monotonic() + self.pacing.asr_rtf * wav.duration_seconds)
        return wav.transcript


def compose_stub_answer(prompt: str) -> str:
    """Template answer: restate the query, quote every 《book title》 that
    appears in the prompt. Each of the three sentences stays over 30
    characters so downstream pacing tests have material to work with."""
    if not prompt.strip():
        return _FALLBACK_ANSWER
    match = _QUERY_RE.search(prompt)
    query = match.group(1).strip() if match else prompt.strip().splitlines()[0]
    # Sentence terminals inside the restated query would fragment the
    # accumulator's output; soften them to commas.
    core = query.rstrip(_TERMINALS)
    core = "".join("，" if ch in _TERMINALS else ch for ch in core) or "此事"

    titles: list[str] = []
    for title in _TITLE_RE.findall(prompt):
        if title not in titles:
            titles.append(title)

    first = f"「{core}」一问，古籍之中确有记载，源流可考，今依所采文献作答如次。"
    if titles:
        quoted = "".join(f"《{t}》" for t in titles)
        second = f"所据之书，凡{quoted}，其文并引于后，足资参证，学者可覆按焉。"
    else:
        second = "所据之书未有所获，仅以通识约略言之，幸读者谅之，疏漏之处尚祈指正。"
    third = "综而观之，史册昭然，脉络分明，若欲深究其详，宜取原书全文而细读之。"
    return first + second + third


class StubLLM:
    """Streams the template answer one character per token at llm_rate."""

    def __init__(self, pacing: StubPacing | None = None):
        self.pacing = pacing or StubPacing()

    def stream(self, prompt: str) -> Iterator[str]:
        answer = compose_stub_answer(prompt)
        rate = self.pacing.llm_rate
        start = time.monotonic()
        for i, ch in enumerate(answer):
            if rate > 0:
                _sleep_until(start + (i + 1) / rate)
            yield ch


BLOCK_SECONDS = 0.020
DEFAULT_CHAR_DURATION = 0.25  # seconds of speech per character
TONE_HZ = 440.0


class StubTTS:
    """Emits a 440 Hz tone, char_duration seconds per character, in 20 ms
    blocks, pacing synthesis at tts_rtf seconds of work per audio second."""

    def __init__(
        self,
        pacing: StubPacing | None = None,
        sample_rate: int = 16000,
        char_duration: float = DEFAULT_CHAR_DURATION,
        fail_on_sentence: int | None = None,
    ):
        self.pacing = pacing or StubPacing()
        self.sample_rate = sample_rate
        self.char_duration = char_duration
        self.fail_on_sentence = fail_on_sentence
        self._sentences_seen = 0

    def render_pcm(self, sentence: str) -> bytes:
        n = int(round(len(sentence) * self.char_duration * self.sample_rate))
        t = np.arange(n, dtype=np.float64) / self.sample_rate
        tone = (0.3 * 32767.0 * np.sin(2.0 * np.pi * TONE_HZ * t)).astype("<i2")
        return tone.tobytes()

    def synthesize(self, sentence: str) -> Iterator[bytes]:
        if not sentence:
            raise ValueError("sentence must be nonempty")
        self._sentences_seen += 1
        if self.fail_on_sentence is not None and self._sentences_seen == self.fail_on_sentence:
            raise RuntimeError(f"injected synthesis failure on sentence {self._sentences_seen}")
        pcm = self.render_pcm(sentence)
        block_bytes = int(BLOCK_SECONDS * self.sample_rate) * 2
        start = time.monotonic()
        emitted = 0
        for off in range(0, len(pcm), block_bytes):
            block = pcm[off : off + block_bytes]
            emitted += len(block) // 2
            if self.pacing.tts_rtf > 0:
                _sleep_until(start + self.pacing.tts_rtf * (emitted / self.sample_rate))
            yield block


class StubRenderer:
    """Emits ceil(audio_seconds * fps) frames with contiguous indices,
    costing frame_cost seconds of simulated work per frame."""

    def __init__(self, pacing: StubPacing | None = None, fps: int = 25):
        self.pacing = pacing or StubPacing()
        self.fps = fps
        self._samples = 0
        self._emitted = 0
        self._work_clock = 0.0

    def _produce(self, due: int) -> Iterator[int]:
        while self._emitted < due:
            if self.pacing.frame_cost > 0:
                now = time.monotonic()
                self._work_clock = max(now, self._work_clock) + self.pacing.frame_cost
                _sleep_until(self._work_clock)
            index = self._emitted
            self._emitted += 1
            yield index

    def drive(self, pcm_block: bytes | None, sample_rate: int) -> Iterator[int]:
        if pcm_block is None:
            # Flush: cover any partial trailing frame.
            due = -((-self._samples * self.fps) // sample_rate)  # ceil
        else:
            self._samples += len(pcm_block) // 2
            due = (self._samples * self.fps) // sample_rate
        yield from self._produce(due)
