"""Corpus benchmark: compression factors for the circle codec and the RLE baseline.

Every file is compressed, decompressed and compared byte for byte before
any factor is reported; a roundtrip mismatch aborts the whole run because
losslessness is not negotiable.  Factors are original/compressed, so
values above 1 mean compression.  The overall row is size-weighted:
total original over total compressed, not a mean of per-file factors.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import csv
import io

from .container import serialize
from .decoder import decode
from .encoder import encode
from .rle import rle_decode, rle_encode

CODEC_NAMES = ("cc", "rle")


class LosslessnessError(RuntimeError):
    """A codec failed to reproduce a file byte for byte."""


@dataclass
class BenchRow:
    name: str
    original: int
    cc_size: int | None
    cc_factor: float | None
    rle_size: int | None
    rle_factor: float | None
    verified: bool


@dataclass
class BenchReport:
    rows: list[BenchRow] = field(default_factory=list)
    warnings: list[tuple[str, str]] = field(default_factory=list)

    def overall(self) -> BenchRow | None:
        """Size-weighted aggregate row, or None for an empty report."""
        if not self.rows:
            return None
        original = sum(r.original for r in self.rows)
        cc = [r.cc_size for r in self.rows if r.cc_size is not None]
        rle = [r.rle_size for r in self.rows if r.rle_size is not None]
        cc_size = sum(cc) if cc else None
        rle_size = sum(rle) if rle else None
        return BenchRow(
            "overall",
            original,
            cc_size,
            _safe_factor(original, cc_size),
            rle_size,
            _safe_factor(original, rle_size),
            all(r.verified for r in self.rows),
        )


def compression_factor(original_size: int, compressed_size: int) -> float:
    if compressed_size <= 0:
        raise ValueError("compressed size must be positive")
    return original_size / compressed_size


def _safe_factor(original: int, compressed: int | None) -> float | None:
    if compressed is None:
        return None
    return compression_factor(original, compressed) if compressed > 0 else 0.0


def run_corpus(directory: str | Path, codecs: Sequence[str] = CODEC_NAMES) -> BenchReport:
    """Benchmark every regular file in ``directory`` (sorted by name).

    Unreadable files are skipped with a recorded warning; a roundtrip
    failure raises :class:`LosslessnessError` and aborts the run.
    """
    directory = Path(directory)
    unknown = set(codecs) - set(CODEC_NAMES)
    if unknown:
        raise ValueError(f"unknown codecs: {sorted(unknown)}")
    report = BenchReport()
    for path in sorted(directory.iterdir(), key=lambda p: p.name):
        if path.is_dir():
            continue
        try:
            data = path.read_bytes()
        except OSError as exc:
            report.warnings.append((path.name, str(exc)))
            continue

        cc_size = rle_size = None
        if "cc" in codecs:
            archive = serialize(encode(data))
            if decode(archive) != data:
                raise LosslessnessError(f"cc roundtrip mismatch on {path.name}")
            cc_size = len(archive)
        if "rle" in codecs:
            packed = rle_encode(data)
            if rle_decode(packed) != data:
                raise LosslessnessError(f"rle roundtrip mismatch on {path.name}")
            rle_size = len(packed)

        report.rows.append(
            BenchRow(
                path.name,
                len(data),
                cc_size,
                _safe_factor(len(data), cc_size),
                rle_size,
                _safe_factor(len(data), rle_size),
                True,
            )
        )
    return report


_COLUMNS = ("name", "original", "cc_size", "cc_factor", "rle_size", "rle_factor", "verified")


def _cells(row: BenchRow) -> list[str]:
    return [
        row.name,
        str(row.original),
        "" if row.cc_size is None else str(row.cc_size),
        "" if row.cc_factor is None else f"{row.cc_factor:.3f}",
        "" if row.rle_size is None else str(row.rle_size),
        "" if row.rle_factor is None else f"{row.rle_factor:.3f}",
        "true" if row.verified else "false",
    ]


def emit_report(report: BenchReport, format: str = "markdown") -> str:
    """Render a report as ``csv`` or ``markdown`` text, deterministically."""
    rows = list(report.rows)
    overall = report.overall()
    if overall is not None:
        rows.append(overall)
    if format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(_COLUMNS)
        for row in rows:
            writer.writerow(_cells(row))
        return buf.getvalue()
    if format == "markdown":
        lines = [
            "| " + " | ".join(_COLUMNS) + " |",
            "|" + "|".join(" --- " for _ in _COLUMNS) + "|",
        ]
        for row in rows:
            lines.append("| " + " | ".join(_cells(row)) + " |")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown report format {format!r}")
