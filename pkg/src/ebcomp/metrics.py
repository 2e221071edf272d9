"""Quality metrics, bound verification, and rate-distortion sweeps."""

from __future__ import annotations

import csv
import json
import math
import time
from dataclasses import dataclass, fields

import numpy as np

from .archive import parse_archive
from .errors import DimsMismatch, VerificationFailed
from .grid import Grid, value_range
from .pipeline import compress, decompress

__all__ = [
    "RateDistortionRecord",
    "BoundReport",
    "psnr",
    "compression_ratio",
    "bit_rate",
    "verify_error_bound",
    "transfer_time",
    "rd_sweep",
    "write_records_csv",
    "write_records_jsonl",
]


@dataclass(frozen=True)
class RateDistortionRecord:
    dataset: str
    predictor: str
    eb_mode: str
    eb_value: float
    pass2: bool
    cr: float
    bit_rate: float
    psnr: float
    max_abs_err: float
    compress_seconds: float
    decompress_seconds: float


@dataclass(frozen=True)
class BoundReport:
    max_abs_err: float
    violations: int
    first_violation: int  # flat index; -1 when none

    @property
    def ok(self) -> bool:
        return self.violations == 0


def _check_dims(a: Grid, b: Grid) -> None:
    if a.dims != b.dims:
        raise DimsMismatch(f"{a.dims.extents} vs {b.dims.extents}")


def psnr(a: Grid, b: Grid) -> float:
    """10*log10(range^2 / MSE) against a's value range; inf when identical."""
    _check_dims(a, b)
    diff = a.data.astype(np.float64) - b.data.astype(np.float64)
    mse = float(np.mean(diff * diff))
    _, _, rng = value_range(a)
    if mse == 0.0:
        return math.inf
    if rng == 0.0:
        return -math.inf
    return 10.0 * math.log10(rng * rng / mse)


def compression_ratio(original_bytes: int, archive_bytes: int) -> float:
    return original_bytes / archive_bytes


def bit_rate(cr: float) -> float:
    """Average compressed bits per element for binary32 inputs."""
    return 32.0 / cr


def verify_error_bound(original: Grid, decompressed: Grid, eb_abs: float) -> BoundReport:
    """Exhaustive pointwise |orig - decomp| <= eb_abs check."""
    _check_dims(original, decompressed)
    diff = np.abs(
        original.data.astype(np.float64) - decompressed.data.astype(np.float64)
    ).ravel()
    bad = diff > eb_abs
    violations = int(bad.sum())
    first = int(np.argmax(bad)) if violations else -1
    return BoundReport(
        max_abs_err=float(diff.max()) if diff.size else 0.0,
        violations=violations,
        first_violation=first,
    )


def transfer_time(
    original_bytes: float,
    cr: float,
    comp_throughput_Bps: float,
    decomp_throughput_Bps: float,
    link_Bps: float,
) -> float:
    """Compress + move-the-compressed-bytes + decompress, local I/O excluded."""
    return (
        original_bytes / comp_throughput_Bps
        + (original_bytes / cr) / link_Bps
        + original_bytes / decomp_throughput_Bps
    )


def rd_sweep(
    grid: Grid,
    predictor: str,
    ebs,
    pass2: bool,
    mode: str = "rel",
    dataset: str = "grid",
    threads: int = None,
) -> list:
    """One full round trip per eb; every record is bound-verified.

    Returns records sorted by bit rate (ascending).
    """
    records = []
    original_bytes = 4 * grid.dims.count
    for eb in ebs:
        t0 = time.perf_counter()
        blob = compress(grid, eb, mode=mode, predictor=predictor, pass2=pass2, threads=threads)
        t1 = time.perf_counter()
        out = decompress(blob, threads=threads)
        t2 = time.perf_counter()
        eb_abs = parse_archive(blob).eb_abs
        report = verify_error_bound(grid, out, eb_abs)
        if not report.ok:
            raise VerificationFailed(
                f"{report.violations} bound violations at eb={eb} ({mode}), "
                f"first at flat index {report.first_violation}"
            )
        cr = compression_ratio(original_bytes, len(blob))
        records.append(
            RateDistortionRecord(
                dataset=dataset,
                predictor=predictor,
                eb_mode=mode,
                eb_value=float(eb),
                pass2=bool(pass2),
                cr=cr,
                bit_rate=bit_rate(cr),
                psnr=psnr(grid, out),
                max_abs_err=report.max_abs_err,
                compress_seconds=t1 - t0,
                decompress_seconds=t2 - t1,
            )
        )
    records.sort(key=lambda r: r.bit_rate)
    return records


def _cell(value):
    if isinstance(value, float) and math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return value


def _record_row(record: RateDistortionRecord) -> dict:
    return {f.name: _cell(getattr(record, f.name)) for f in fields(record)}


def write_records_csv(records, stream) -> None:
    names = [f.name for f in fields(RateDistortionRecord)]
    writer = csv.DictWriter(stream, fieldnames=names)
    writer.writeheader()
    for record in records:
        writer.writerow(_record_row(record))


def write_records_jsonl(records, stream) -> None:
    for record in records:
        stream.write(json.dumps(_record_row(record)) + "\n")
