import pytest
from hypothesis import given, settings, strategies as st

from ccz.container import CompressedEntry, EncodedParts, serialize
from ccz.decoder import CorruptArchiveError, decode, undo_delta
from ccz.encoder import encode

from oracles import (
    chain_circles,
    check_non_crossing,
    ref_decode,
    strictly_increasing,
    underflow_input,
)


class TestUndoDelta:
    def test_inverse_of_reference_handover(self):
        live = undo_delta([CompressedEntry(1, ord("A"), 2), CompressedEntry(0, ord("B"), 3)])
        assert [(e.ch, e.start, e.count) for e in live] == [(ord("A"), 1, 2), (ord("B"), 1, 3)]

    def test_single_entry(self):
        live = undo_delta([CompressedEntry(5, ord("X"), 3)])
        assert [(e.ch, e.start, e.count) for e in live] == [(ord("X"), 5, 3)]

    def test_rebases_accumulate(self):
        live = undo_delta(
            [
                CompressedEntry(255, 0, 0),
                CompressedEntry(44, 0, 0),
                CompressedEntry(1, ord("Q"), 3),
            ]
        )
        assert [(e.ch, e.start, e.count) for e in live] == [(ord("Q"), 300, 3)]

    def test_rejects_nonpositive_start(self):
        with pytest.raises(CorruptArchiveError):
            undo_delta([CompressedEntry(0, ord("A"), 2)])
        with pytest.raises(CorruptArchiveError):
            undo_delta([CompressedEntry(3, ord("A"), 2), CompressedEntry(-5, ord("B"), 2)])


def runs_strategy():
    # absolute runs in plausible serialized order: starts mostly ascending
    def build(raw):
        runs = []
        start = 0
        for ch, gap, count in raw:
            start = max(1, start + gap)
            runs.append((ch, start, count))
        return runs

    return st.lists(
        st.tuples(st.integers(0, 255), st.integers(0, 100), st.integers(2, 127)),
        max_size=40,
    ).map(build)


@given(runs_strategy())
def test_delta_composition_law(runs):
    from ccz.encoder import RunNode, delta_encode_entries

    nodes = [RunNode(ch, start, count, list(range(count))) for ch, start, count in runs]
    live = undo_delta(delta_encode_entries(nodes))
    assert [(e.ch, e.start, e.count) for e in live] == runs


def test_decode_golden_archives():
    assert decode(serialize(encode(b"ABABBA"))) == b"ABABBA"
    assert decode(serialize(encode(b"THEPHONEBLAH"))) == b"THEPHONEBLAH"
    assert decode(serialize(encode(b""))) == b""


def test_decode_errors_when_no_entry_is_admissible():
    # the only entry starts at circle 5; both flags are in circles 1 and 2
    parts = EncodedParts(bytearray([1, 1]), b"", [CompressedEntry(5, ord("B"), 2)])
    with pytest.raises(CorruptArchiveError, match="no admissible entry"):
        decode(serialize(parts))


def test_decode_errors_on_duplicate_byte_in_circle():
    # two runs of the same byte over the same circles cannot coexist
    parts = EncodedParts(
        bytearray([1, 1, 1, 1]),
        b"",
        [CompressedEntry(1, ord("B"), 2), CompressedEntry(0, ord("B"), 2)],
    )
    with pytest.raises(CorruptArchiveError, match="duplicates circle"):
        decode(serialize(parts))


def test_decode_errors_on_entry_left_unfilled():
    # entry covers circles 1..2 but the literals push its second flag to circle 3
    parts = EncodedParts(bytearray([1, 0, 0, 0, 1]), b"AAA", [CompressedEntry(1, ord("B"), 2)])
    with pytest.raises(CorruptArchiveError, match="unfilled"):
        decode(serialize(parts))


def test_reference_decoder_agrees_on_examples():
    for data in (
        b"ABABBA",
        b"THEPHONEBLAH",
        b"AAAA",
        b"ABCDEFG" * 128,
        b"AB" * 300,
        chain_circles(300),
        underflow_input(),
    ):
        archive = serialize(encode(data))
        assert decode(archive) == data
        ref_out, matches, occurrences = ref_decode(archive)
        assert ref_out == data
        for circle_matches in matches:
            assert strictly_increasing(circle_matches)
        assert check_non_crossing(occurrences)


@settings(max_examples=250, deadline=None)
@given(st.binary(max_size=512))
def test_reference_decoder_agrees_random(data):
    archive = serialize(encode(data))
    out = decode(archive)
    ref_out, matches, _ = ref_decode(archive)
    assert out == data
    assert ref_out == data
    for circle_matches in matches:
        assert circle_matches == sorted(circle_matches)


@settings(max_examples=250, deadline=None)
@given(st.lists(st.integers(0, 5), max_size=700).map(bytes))
def test_decode_circles_match_input_segmentation(data):
    from ccz.circles import split_circles

    archive = serialize(encode(data))
    out = decode(archive)
    assert out == data
    # the decoder's uniqueness rule recomputes exactly these circles
    _, matches, occurrences = ref_decode(archive)
    seg = split_circles(out)
    if data:
        assert len(matches) == seg.circle_count
    for idx, occ in occurrences.items():
        for circle, offset in occ.items():
            start, length = seg.span(circle)
            assert start <= offset < start + length
