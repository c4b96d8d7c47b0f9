"""Lossless compression through concentric-circle run detection.

The input is split into circles (maximal substrings of distinct bytes) and
a run is one byte value recurring in consecutive circles at order-
compatible positions.  Runs need not be contiguous in the stream, which
generalizes run-length encoding to positional redundancy.  ``compress``
and ``decompress`` wrap the full pipeline; the submodules expose the
individual stages.
"""

from .circles import CirclePosition, CircleSegmentation, position_of, split_circles
from .container import (
    ArchiveFormatError,
    CompressedEntry,
    EncodedParts,
    pack_flags,
    parse,
    serialize,
    unpack_flags,
)
from .decoder import CorruptArchiveError, LiveEntry, decode, undo_delta
from .encoder import (
    EncoderState,
    RunNode,
    delta_encode_entries,
    encode,
    paradox_check,
    remove_redundant_entries,
    trace_encode,
)
from .rle import rle_decode, rle_encode

__version__ = "0.1.0"


def compress(data: bytes) -> bytes:
    """Compress ``data`` into a self-contained archive."""
    return serialize(encode(data))


def decompress(archive: bytes) -> bytes:
    """Restore the exact original bytes from an archive."""
    return decode(archive)


__all__ = [
    "ArchiveFormatError",
    "CirclePosition",
    "CircleSegmentation",
    "CompressedEntry",
    "CorruptArchiveError",
    "EncodedParts",
    "EncoderState",
    "LiveEntry",
    "RunNode",
    "compress",
    "decode",
    "decompress",
    "delta_encode_entries",
    "encode",
    "pack_flags",
    "paradox_check",
    "parse",
    "position_of",
    "remove_redundant_entries",
    "rle_decode",
    "rle_encode",
    "serialize",
    "split_circles",
    "trace_encode",
    "undo_delta",
    "unpack_flags",
]
