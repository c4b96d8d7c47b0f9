"""Classic run-length codec used as the comparison baseline.

Every maximal run of one byte value becomes a [value][length] pair with
length 1..255; longer runs split into 255-sized chunks.  Input with no
repetition therefore doubles in size.  Raw pairs only, no header.
"""

from itertools import groupby


def rle_encode(data: bytes) -> bytes:
    out = bytearray()
    for value, group in groupby(data):
        n = sum(1 for _ in group)
        while n > 255:
            out += bytes((value, 255))
            n -= 255
        out += bytes((value, n))
    return bytes(out)


def rle_decode(encoded: bytes) -> bytes:
    if len(encoded) % 2:
        raise ValueError("run-length data must be an even number of bytes")
    out = bytearray()
    for i in range(0, len(encoded), 2):
        run = encoded[i + 1]
        if run == 0:
            raise ValueError(f"zero run length at byte {i + 1}")
        out += encoded[i:i + 1] * run
    return bytes(out)
