"""Bit-exact archive container.

Layout (all integers little-endian):

  offset  size  field
  ------  ----  -----
       0     4  magic "CSZI"
       4     1  version (1)
       5     1  rank (1..3)
       6     1  predictor id (0 = multilevel spline, 1 = Lorenzo)
       7     1  error-bound mode (0 = absolute, 1 = range-relative)
       8     1  pass-2 flag
       9     1  pass-2 codec id
      10     3  per-dimension cubic variant ids (unused dims 0)
      13     3  dimension processing order (unused dims 0)
      16     4  quantizer radius R       (uint32)
      20     4  anchor stride            (uint32, 0 when no anchors)
      24    24  extents, slowest first   (3 x uint64, unused dims 1)
      48     8  error bound as given     (float64)
      56     8  resolved absolute bound  (float64)
      64     8  level bound growth alpha (float64)
      72    40  section byte lengths: anchors, codebook, bitstream,
                outliers (pre-pass-2), then encoded payload length
     112     -  payload

The payload is the four sections concatenated; with the pass-2 flag set the
concatenation is pass2-encoded as one blob and the stored payload length is
the encoded size while the four section lengths stay pre-encoding.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .errors import BadMagic, Corrupt, LengthMismatch, MalformedSection, VersionUnsupported
from .pass2 import pass2_decode, pass2_encode

__all__ = [
    "MAGIC",
    "VERSION",
    "HEADER_SIZE",
    "Archive",
    "serialize_archive",
    "parse_archive",
    "compact_outliers",
    "expand_outliers",
]

MAGIC = b"CSZI"
VERSION = 1
HEADER_SIZE = 112

_HEADER = struct.Struct("<4s6B3B3B2I3Q3d5Q")
assert _HEADER.size == HEADER_SIZE

_PAIR_DTYPE = np.dtype([("idx", "<u8"), ("val", "<f4")])

PREDICTOR_INTERP = 0
PREDICTOR_LORENZO = 1
EB_ABS = 0
EB_REL = 1


@dataclass(frozen=True)
class Archive:
    """Parsed archive: semantic header fields plus raw section bytes."""

    rank: int
    extents: tuple
    predictor: int
    eb_mode: int
    eb_value: float
    eb_abs: float
    alpha: float
    variants: tuple
    dim_order: tuple
    quant_radius: int
    anchor_stride: int
    pass2: bool
    pass2_codec: int
    anchors: bytes
    codebook: bytes
    bitstream: bytes
    outliers: bytes

    @property
    def count(self) -> int:
        n = 1
        for e in self.extents:
            n *= e
        return n


def _pad3(values, fill) -> tuple:
    out = list(values) + [fill] * (3 - len(values))
    return tuple(out[:3])


def serialize_archive(archive: Archive) -> bytes:
    sections = archive.anchors + archive.codebook + archive.bitstream + archive.outliers
    payload = pass2_encode(sections, archive.pass2_codec) if archive.pass2 else sections
    header = _HEADER.pack(
        MAGIC,
        VERSION,
        archive.rank,
        archive.predictor,
        archive.eb_mode,
        1 if archive.pass2 else 0,
        archive.pass2_codec,
        *_pad3(archive.variants, 0),
        *_pad3(archive.dim_order, 0),
        archive.quant_radius,
        archive.anchor_stride,
        *_pad3(archive.extents, 1),
        archive.eb_value,
        archive.eb_abs,
        archive.alpha,
        len(archive.anchors),
        len(archive.codebook),
        len(archive.bitstream),
        len(archive.outliers),
        len(payload),
    )
    return header + payload


def parse_archive(data: bytes) -> Archive:
    if len(data) < HEADER_SIZE:
        raise LengthMismatch(f"archive shorter than the {HEADER_SIZE}-byte header")
    fields = _HEADER.unpack_from(data, 0)
    (magic, version, rank, predictor, eb_mode, pass2_flag, pass2_codec) = fields[:7]
    if magic != MAGIC:
        raise BadMagic(f"bad magic {magic!r}")
    if version != VERSION:
        raise VersionUnsupported(f"archive version {version}, expected {VERSION}")
    if not 1 <= rank <= 3:
        raise Corrupt(f"rank {rank} out of range")
    variants = fields[7:10]
    dim_order = fields[10:13]
    quant_radius, anchor_stride = fields[13:15]
    extents = fields[15:18]
    eb_value, eb_abs, alpha = fields[18:21]
    sec_lens = fields[21:25]
    payload_len = fields[25]
    if len(data) - HEADER_SIZE != payload_len:
        raise LengthMismatch(
            f"payload is {len(data) - HEADER_SIZE} bytes, header says {payload_len}"
        )
    payload = data[HEADER_SIZE:]
    if pass2_flag:
        payload = pass2_decode(payload, pass2_codec)
    if len(payload) != sum(sec_lens):
        raise LengthMismatch(
            f"sections total {len(payload)} bytes, header says {sum(sec_lens)}"
        )
    bounds = np.cumsum((0,) + sec_lens)
    anchors, codebook, bitstream, outliers = (
        payload[bounds[i] : bounds[i + 1]] for i in range(4)
    )
    return Archive(
        rank=rank,
        extents=tuple(int(e) for e in extents[:rank]),
        predictor=predictor,
        eb_mode=eb_mode,
        eb_value=eb_value,
        eb_abs=eb_abs,
        alpha=alpha,
        variants=tuple(int(v) for v in variants[:rank]),
        dim_order=tuple(int(d) for d in dim_order[:rank]),
        quant_radius=int(quant_radius),
        anchor_stride=int(anchor_stride),
        pass2=bool(pass2_flag),
        pass2_codec=int(pass2_codec),
        anchors=bytes(anchors),
        codebook=bytes(codebook),
        bitstream=bytes(bitstream),
        outliers=bytes(outliers),
    )


def compact_outliers(outliers) -> bytes:
    """Serialize (flat index, float32 value) pairs: u64 count then 12-byte pairs."""
    pairs = np.asarray(
        [(int(i), float(v)) for i, v in outliers], dtype=_PAIR_DTYPE
    )
    return struct.pack("<Q", pairs.shape[0]) + pairs.tobytes()


def expand_outliers(section: bytes):
    """Inverse of compact_outliers; validates layout and index monotonicity."""
    if len(section) < 8:
        raise MalformedSection("outlier section shorter than its count field")
    (count,) = struct.unpack_from("<Q", section, 0)
    body = section[8:]
    if len(body) != count * _PAIR_DTYPE.itemsize:
        raise MalformedSection(
            f"outlier section holds {len(body)} pair bytes, count field says {count}"
        )
    pairs = np.frombuffer(body, dtype=_PAIR_DTYPE)
    idx = pairs["idx"]
    if idx.size > 1 and not np.all(idx[1:] > idx[:-1]):
        raise MalformedSection("outlier indices are not strictly increasing")
    return [(int(i), float(v)) for i, v in zip(idx, pairs["val"])]
