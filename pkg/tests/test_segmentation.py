"""Segmentation: lossless coverage, window discipline, boundary cuts."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from voicerag.corpus import Period, SegmentPolicy, SourceDocument, Theme, segment_document
from voicerag.errors import EmptyDocumentError

PUNCT = frozenset("。！？.")


def make_doc(body, page_breaks=None):
    return SourceDocument.create(
        title="试卷", period=Period.Han, theme=Theme.RiverGovernance,
        body=body, page_breaks=page_breaks or [],
    )


def oracle_segments(body, max_chars, punct):
    """Independent formulation: split into punctuation-terminated runs, then
    greedily pack runs into chunks of at most max_chars. An oversized run
    goes out alone, and so does a trailing run without terminal punctuation
    (a chunk must end at punctuation whenever its window holds any)."""
    runs, start = [], 0
    for i, ch in enumerate(body):
        if ch in punct:
            runs.append(body[start:i + 1])
            start = i + 1
    residue = body[start:] if start < len(body) else None

    chunks, cur = [], ""
    for run in runs:
        if not cur:
            cur = run
        elif len(cur) + len(run) <= max_chars:
            cur += run
        else:
            chunks.append(cur)
            cur = run
    if cur:
        chunks.append(cur)
    if residue is not None:
        chunks.append(residue)
    return chunks


def test_each_sentence_fills_window():
    chunks = segment_document(make_doc("甲。乙。"), SegmentPolicy(max_chars=2, boundary_punctuation=PUNCT))
    assert [c.text for c in chunks] == ["甲。", "乙。"]


def test_single_chunk_identity():
    chunks = segment_document(make_doc("x"), SegmentPolicy(max_chars=500, boundary_punctuation=PUNCT))
    assert [c.text for c in chunks] == ["x"]


def test_empty_body_rejected():
    doc = make_doc("x")
    doc.body = ""
    with pytest.raises(EmptyDocumentError):
        segment_document(doc, SegmentPolicy(max_chars=10))


def test_forced_overrun_extends_to_next_punctuation():
    # 6-char run with no punctuation inside a 3-char window.
    chunks = segment_document(make_doc("甲乙丙丁戊己。庚。"), SegmentPolicy(max_chars=3, boundary_punctuation=PUNCT))
    assert [c.text for c in chunks] == ["甲乙丙丁戊己。", "庚。"]


def test_random_strings_against_oracle():
    """1,000 random bodies: exact agreement with the greedy-pack oracle,
    lossless concatenation, and no unforced overruns."""
    rng = random.Random(1234)
    alphabet = "甲乙丙丁河水。！？."
    for _ in range(1000):
        body = "".join(rng.choice(alphabet) for _ in range(rng.randint(1, 120)))
        max_chars = rng.randint(1, 50)
        policy = SegmentPolicy(max_chars=max_chars, boundary_punctuation=PUNCT)
        texts = [c.text for c in segment_document(make_doc(body), policy)]

        assert "".join(texts) == body
        assert texts == oracle_segments(body, max_chars, PUNCT)
        for t in texts:
            if len(t) > max_chars:
                # Forced overrun: a single run, no punctuation before its tail.
                assert not any(ch in PUNCT for ch in t[:-1])


@settings(max_examples=300, deadline=None)
@given(
    body=st.text(alphabet="ab河。!x", min_size=1, max_size=200),
    max_chars=st.integers(min_value=1, max_value=40),
)
def test_property_lossless_and_ordered(body, max_chars):
    policy = SegmentPolicy(max_chars=max_chars, boundary_punctuation=PUNCT)
    chunks = segment_document(make_doc(body), policy)
    assert "".join(c.text for c in chunks) == body
    spans = [c.span for c in chunks]
    # Ordered, non-overlapping, covering.
    assert spans[0][0] == 0 and spans[-1][1] == len(body)
    for (a_start, a_end), (b_start, b_end) in zip(spans, spans[1:]):
        assert a_end == b_start


def test_page_numbers_follow_breaks():
    body = "一。二。三。四。"
    doc = make_doc(body, page_breaks=[4])
    chunks = segment_document(doc, SegmentPolicy(max_chars=2, boundary_punctuation=PUNCT))
    assert [c.page_number for c in chunks] == [1, 1, 2, 2]


def test_chunk_ids_content_derived_and_stable():
    doc = make_doc("甲。乙。")
    a = segment_document(doc, SegmentPolicy(max_chars=2, boundary_punctuation=PUNCT))
    b = segment_document(doc, SegmentPolicy(max_chars=2, boundary_punctuation=PUNCT))
    assert [c.chunk_id for c in a] == [c.chunk_id for c in b]
    assert len({c.chunk_id for c in a}) == len(a)
