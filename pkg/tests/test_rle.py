import pytest
from hypothesis import given, strategies as st

from ccz.rle import rle_decode, rle_encode


def test_encode_examples():
    assert rle_encode(b"AAAB") == bytes([ord("A"), 3, ord("B"), 1])
    assert rle_encode(b"ABC") == bytes([ord("A"), 1, ord("B"), 1, ord("C"), 1])
    assert rle_encode(b"") == b""


def test_decode_examples():
    assert rle_decode(bytes([ord("A"), 3, ord("B"), 1])) == b"AAAB"
    assert rle_decode(b"") == b""
    assert rle_decode(bytes([ord("A"), 255, ord("A"), 2])) == b"A" * 257


def test_long_runs_split_at_255():
    assert rle_encode(b"A" * 257) == bytes([ord("A"), 255, ord("A"), 2])
    assert rle_encode(b"A" * 255) == bytes([ord("A"), 255])
    assert rle_encode(b"A" * 510) == bytes([ord("A"), 255, ord("A"), 255])


def test_decode_rejects_odd_length():
    with pytest.raises(ValueError, match="even"):
        rle_decode(b"A")


def test_decode_rejects_zero_run():
    with pytest.raises(ValueError, match="zero run"):
        rle_decode(bytes([ord("A"), 0]))


@given(st.binary(max_size=4096))
def test_roundtrip(data):
    assert rle_decode(rle_encode(data)) == data


@given(st.binary(max_size=2048))
def test_output_size_is_twice_the_run_count(data):
    encoded = rle_encode(data)
    runs = 0
    i = 0
    while i < len(data):
        j = i
        while j < len(data) and data[j] == data[i] and j - i < 255:
            j += 1
        runs += 1
        i = j
    assert len(encoded) == 2 * runs


@given(st.binary(max_size=2048))
def test_adjacent_pairs_only_repeat_after_full_runs(data):
    encoded = rle_encode(data)
    pairs = [(encoded[i], encoded[i + 1]) for i in range(0, len(encoded), 2)]
    for (ch1, run1), (ch2, _) in zip(pairs, pairs[1:]):
        if ch1 == ch2:
            assert run1 == 255
