"""Canonical Huffman coding of quantization codes.

Codes live in (-R, R) and are shifted by +R into symbol space [0, 2R) before
counting or encoding.  The codebook is canonical — fully determined by the
per-symbol code lengths — so archives only need to store the lengths, and any
two builds of the same histogram produce bit-identical streams.  Tree
construction breaks frequency ties on the smallest symbol contained in each
node, which pins down the lengths themselves.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import heapq

import numpy as np

from .errors import (
    EmptyHistogram,
    LengthOverflow,
    OutOfRange,
    TruncatedStream,
    UnknownSymbol,
)
from ._kernels import huffman_decode_kernel, huffman_encode_kernel

__all__ = [
    "MAX_CODE_LENGTH",
    "Histogram",
    "Codebook",
    "build_histogram",
    "build_codebook",
    "huffman_encode",
    "huffman_decode",
]

MAX_CODE_LENGTH = 32


@dataclass(frozen=True, eq=False)
class Histogram:
    """Symbol counts indexed by shifted code q + R."""

    counts: np.ndarray

    @property
    def num_bins(self) -> int:
        return int(self.counts.shape[0])

    @property
    def radius(self) -> int:
        return self.num_bins // 2

    @property
    def total(self) -> int:
        return int(self.counts.sum())


def build_histogram(codes, radius: int) -> Histogram:
    """Count quantization codes into 2*radius bins.

    Raises OutOfRange if any |code| >= radius: that is a predictor contract
    violation, not a recoverable input.
    """
    arr = np.ascontiguousarray(codes, dtype=np.int64).ravel()
    if arr.size:
        lo = int(arr.min())
        hi = int(arr.max())
        if lo <= -radius or hi >= radius:
            bad = lo if lo <= -radius else hi
            raise OutOfRange(f"code {bad} outside (-{radius}, {radius})")
    counts = np.bincount(arr + radius, minlength=2 * radius).astype(np.int64)
    return Histogram(counts=counts)


def _code_lengths(counts: np.ndarray) -> np.ndarray:
    """Huffman code lengths with deterministic (freq, min symbol) tie-breaks."""
    lengths = np.zeros(counts.shape[0], dtype=np.uint8)
    alive = np.nonzero(counts)[0]
    if alive.size == 0:
        raise EmptyHistogram("cannot build a codebook from all-zero counts")
    if alive.size == 1:
        lengths[alive[0]] = 1
        return lengths
    # Heap items: (frequency, smallest contained symbol, [symbols]).  Each
    # symbol lives in exactly one node, so the first two fields order items
    # strictly and the lists are never compared.
    heap = [(int(counts[s]), int(s), [int(s)]) for s in alive]
    heapq.heapify(heap)
    while len(heap) > 1:
        f1, m1, s1 = heapq.heappop(heap)
        f2, m2, s2 = heapq.heappop(heap)
        merged = s1 + s2
        for s in merged:
            lengths[s] += 1
            if lengths[s] > MAX_CODE_LENGTH:
                raise LengthOverflow(
                    f"symbol {s} would need more than {MAX_CODE_LENGTH} bits"
                )
        heapq.heappush(heap, (f1 + f2, min(m1, m2), merged))
    return lengths


@dataclass(frozen=True, eq=False)
class Codebook:
    """Canonical codes plus the derived tables both bitstream kernels use."""

    code_lengths: np.ndarray  # uint8, one per symbol
    words: np.ndarray = field(repr=False, default=None)  # uint32 canonical codes
    first_code: np.ndarray = field(repr=False, default=None)  # by length, 0..32
    first_index: np.ndarray = field(repr=False, default=None)
    length_counts: np.ndarray = field(repr=False, default=None)
    sorted_symbols: np.ndarray = field(repr=False, default=None)

    @property
    def num_symbols(self) -> int:
        return int(self.code_lengths.shape[0])

    @property
    def radius(self) -> int:
        return self.num_symbols // 2

    def kraft_sum(self) -> float:
        used = self.code_lengths[self.code_lengths > 0].astype(np.float64)
        return float(np.sum(2.0 ** -used))

    @staticmethod
    def from_lengths(code_lengths) -> "Codebook":
        """Rebuild canonical codes and decode tables from lengths alone."""
        lens = np.ascontiguousarray(code_lengths, dtype=np.uint8)
        if lens.size and int(lens.max()) > MAX_CODE_LENGTH:
            raise LengthOverflow("stored code length exceeds 32 bits")
        coded = np.nonzero(lens)[0]
        # Canonical order: (length ascending, symbol ascending).
        order = coded[np.argsort(lens[coded], kind="stable")]
        words = np.zeros(lens.shape[0], dtype=np.uint32)
        first_code = np.zeros(MAX_CODE_LENGTH + 1, dtype=np.int64)
        first_index = np.zeros(MAX_CODE_LENGTH + 1, dtype=np.int64)
        length_counts = np.zeros(MAX_CODE_LENGTH + 1, dtype=np.int64)
        code = 0
        prev_len = 0
        for idx, sym in enumerate(order):
            ln = int(lens[sym])
            code <<= ln - prev_len
            if ln != prev_len:
                first_code[ln] = code
                first_index[ln] = idx
            length_counts[ln] += 1
            words[sym] = code
            code += 1
            prev_len = ln
        return Codebook(
            code_lengths=lens,
            words=words,
            first_code=first_code,
            first_index=first_index,
            length_counts=length_counts,
            sorted_symbols=order.astype(np.int64),
        )


def build_codebook(hist: Histogram) -> Codebook:
    return Codebook.from_lengths(_code_lengths(hist.counts))


def huffman_encode(codes, codebook: Codebook) -> tuple[bytes, int]:
    """Pack codes MSB-first; returns (padded byte stream, exact bit count)."""
    arr = np.ascontiguousarray(codes, dtype=np.int64).ravel()
    if arr.size == 0:
        return b"", 0
    symbols = arr + codebook.radius
    lo = int(symbols.min())
    hi = int(symbols.max())
    if lo < 0 or hi >= codebook.num_symbols:
        raise UnknownSymbol(f"code {arr[symbols.argmin() if lo < 0 else symbols.argmax()]} has no codebook entry")
    bit_count = int(codebook.code_lengths[symbols].astype(np.int64).sum())
    out = np.zeros((bit_count + 7) // 8 + 8, dtype=np.uint8)
    written = huffman_encode_kernel(symbols, codebook.code_lengths, codebook.words, out)
    if written < 0:
        raise UnknownSymbol(f"code {arr[-written - 1]} has no codebook entry")
    return out[:written].tobytes(), bit_count


def huffman_decode(stream: bytes, codebook: Codebook, n: int) -> np.ndarray:
    """Decode exactly n codes; inverse of huffman_encode."""
    out = np.empty(n, dtype=np.int64)
    if n == 0:
        return out.astype(np.int32)
    buf = np.frombuffer(stream, dtype=np.uint8)
    status = huffman_decode_kernel(
        buf,
        n,
        codebook.first_code,
        codebook.first_index,
        codebook.length_counts,
        codebook.sorted_symbols,
        out,
    )
    if status != 0:
        raise TruncatedStream(f"bitstream ended before {n} codes were decoded")
    return (out - codebook.radius).astype(np.int32)
