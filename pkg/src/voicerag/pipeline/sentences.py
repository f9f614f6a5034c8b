"""Sentence accumulation over a token stream.

Tokens concatenate into a buffer; every time a terminal punctuation
character lands, the buffer up to and including it is emitted immediately
(no lookahead). Whatever remains at end of stream flushes as a final
sentence so the text path stays lossless.
"""

from __future__ import annotations

from typing import Iterable, Iterator

from .events import DEFAULT_SENTENCE_PUNCTUATION


class SentenceAccumulator:
    def __init__(self, punctuation: frozenset[str] = DEFAULT_SENTENCE_PUNCTUATION):
        self.punctuation = frozenset(punctuation)
        self._buffer: list[str] = []

    def feed(self, token: str) -> list[str]:
        """Absorb one token; return the sentences it completed (often none).

        A single token may complete several sentences when it carries more
        than one terminal mark.
        """
        completed: list[str] = []
        for ch in token:
            self._buffer.append(ch)
            if ch in self.punctuation:
                completed.append("".join(self._buffer))
                self._buffer.clear()
        return completed

    def flush(self) -> str | None:
        """Return the unterminated residue as a final sentence, if any."""
        if not self._buffer:
            return None
        residue = "".join(self._buffer)
        self._buffer.clear()
        return residue


def accumulate_sentences(
    tokens: Iterable[str], punctuation: frozenset[str] = DEFAULT_SENTENCE_PUNCTUATION
) -> Iterator[str]:
    """Stream-splitting generator form of SentenceAccumulator."""
    acc = SentenceAccumulator(punctuation)
    for token in tokens:
        yield from acc.feed(token)
    residue = acc.flush()
    if residue is not None:
        yield residue


def split_sentences(text: str, punctuation: frozenset[str] = DEFAULT_SENTENCE_PUNCTUATION) -> list[str]:
    """Split a whole string after every terminal mark (the accumulator must
    agree with this on the joined token stream)."""
    out: list[str] = []
    start = 0
    for i, ch in enumerate(text):
        if ch in punctuation:
            out.append(text[start : i + 1])
            start = i + 1
    if start < len(text):
        out.append(text[start:])
    return out
