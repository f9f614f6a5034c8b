"""PCM WAV fixtures carrying their transcript in a RIFF LIST/INFO tag.

Hand-rolled RIFF read/write (the stdlib `chunk` helper is gone from newer
interpreters): 16-bit mono PCM plus a LIST chunk whose INFO/ICMT entry
holds the transcript text.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass

from ..errors import UnrecognizedAudioError


@dataclass
class TaggedWav:
    samples: bytes  # int16 little-endian PCM
    sample_rate: int
    transcript: str | None

    @property
    def duration_seconds(self) -> float:
        return (len(self.samples) // 2) / self.sample_rate


def _pad(chunk_body: bytes) -> bytes:
    return chunk_body + (b"\x00" if len(chunk_body) % 2 else b"")


def write_tagged_wav(samples: bytes, sample_rate: int, transcript: str) -> bytes:
    """Serialize mono 16-bit PCM with the transcript in LIST/INFO ICMT."""
    fmt = struct.pack("<HHIIHH", 1, 1, sample_rate, sample_rate * 2, 2, 16)
    comment = transcript.encode("utf-8") + b"\x00"
    info = b"INFO" + b"ICMT" + struct.pack("<I", len(comment)) + _pad(comment)
    chunks = [
        (b"fmt ", fmt),
        (b"LIST", info),
        (b"data", samples),
    ]
    body = b"WAVE"
    for tag, payload in chunks:
        body += tag + struct.pack("<I", len(payload)) + _pad(payload)
    return b"RIFF" + struct.pack("<I", len(body)) + body


def read_tagged_wav(data: bytes) -> TaggedWav:
    """Parse a WAV produced by write_tagged_wav (or any mono PCM16 WAV)."""
    if len(data) < 12 or data[:4] != b"RIFF" or data[8:12] != b"WAVE":
        raise UnrecognizedAudioError("not a RIFF/WAVE stream")
    pos = 12
    sample_rate = None
    samples = None
    transcript = None
    while pos + 8 <= len(data):
        tag = data[pos : pos + 4]
        (size,) = struct.unpack("<I", data[pos + 4 : pos + 8])
        payload = data[pos + 8 : pos + 8 + size]
        if tag == b"fmt ":
            if size < 16:
                raise UnrecognizedAudioError("fmt chunk too small")
            audio_format, channels, rate, _, _, bits = struct.unpack("<HHIIHH", payload[:16])
            if audio_format != 1 or channels != 1 or bits != 16:
                raise UnrecognizedAudioError("expected mono 16-bit PCM")
            sample_rate = rate
        elif tag == b"data":
            samples = payload
        elif tag == b"LIST" and payload[:4] == b"INFO":
            sub = 4
            while sub + 8 <= len(payload):
                sub_tag = payload[sub : sub + 4]
                (sub_size,) = struct.unpack("<I", payload[sub + 4 : sub + 8])
                sub_payload = payload[sub + 8 : sub + 8 + sub_size]
                if sub_tag == b"ICMT":
                    transcript = sub_payload.rstrip(b"\x00").decode("utf-8")
                sub += 8 + sub_size + (sub_size % 2)
        pos += 8 + size + (size % 2)
    if sample_rate is None or samples is None:
        raise UnrecognizedAudioError("missing fmt or data chunk")
    return TaggedWav(samples=samples, sample_rate=sample_rate, transcript=transcript)


def make_fixture_wav(
    transcript: str, duration_seconds: float = 1.0, sample_rate: int = 16000
) -> bytes:
    """A 220 Hz tone of the given length tagged with its transcript."""
    n = int(round(duration_seconds * sample_rate))
    amplitude = 0.2 * 32767
    pcm = struct.pack(
        f"<{n}h",
        *(int(amplitude * math.sin(2 * math.pi * 220 * i / sample_rate)) for i in range(n)),
    )
    return write_tagged_wav(pcm, sample_rate, transcript)
