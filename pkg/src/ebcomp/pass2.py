"""Optional second lossless pass over the serialized sections.

Huffman output for smooth fields is dominated by long runs of 0x00 bytes
(the all-zeros code is usually length-1 and the padding collapses), so a
byte-oriented zero-run codec recovers most of what a heavyweight entropy
coder would.  The codec is pluggable: id 0 is the built-in zero-run scheme
below, other ids may be registered at runtime but archives using them only
decode where that codec is registered too.

Stream grammar (id 0):
  control c in [0, 127]   -> copy the next c+1 bytes verbatim
  control c in [128, 255] -> emit c-127 zero bytes

The encoder only emits zero runs for 2+ consecutive zeros; isolated zeros
travel inside literal runs.  That caps expansion at 1 control byte per 128
input bytes plus one trailing control.
"""

from __future__ import annotations

import numpy as np

from .errors import Corrupt

__all__ = ["pass2_encode", "pass2_decode", "register_pass2_codec", "DEFAULT_CODEC"]

DEFAULT_CODEC = 0


def _zero_runs(data: np.ndarray):
    """Start/length pairs of every run of >= 2 consecutive zero bytes."""
    mask = data == 0
    edged = np.diff(mask.view(np.int8), prepend=np.int8(0), append=np.int8(0))
    starts = np.nonzero(edged == 1)[0]
    ends = np.nonzero(edged == -1)[0]
    keep = (ends - starts) >= 2
    return starts[keep], ends[keep]


def _emit_literals(out: bytearray, chunk: memoryview) -> None:
    pos = 0
    n = len(chunk)
    while pos < n:
        take = min(128, n - pos)
        out.append(take - 1)
        out += chunk[pos : pos + take]
        pos += take


def _zero_run_encode(data: bytes) -> bytes:
    arr = np.frombuffer(data, dtype=np.uint8)
    view = memoryview(data)
    starts, ends = _zero_runs(arr)
    out = bytearray()
    cursor = 0
    for s, e in zip(starts.tolist(), ends.tolist()):
        if cursor < s:
            _emit_literals(out, view[cursor:s])
        run = e - s
        while run > 0:
            take = min(128, run)
            out.append(127 + take)
            run -= take
        cursor = e
    if cursor < len(data):
        _emit_literals(out, view[cursor:])
    return bytes(out)


def _zero_run_decode(data: bytes) -> bytes:
    out = bytearray()
    view = memoryview(data)
    pos = 0
    n = len(data)
    while pos < n:
        c = view[pos]
        pos += 1
        if c < 128:
            take = c + 1
            if pos + take > n:
                raise Corrupt("literal run overruns the encoded stream")
            out += view[pos : pos + take]
            pos += take
        else:
            out += bytes(c - 127)
    return bytes(out)


_REGISTRY = {DEFAULT_CODEC: (_zero_run_encode, _zero_run_decode)}


def register_pass2_codec(codec_id: int, encode, decode) -> None:
    """Register an alternative pass-2 codec under a nonzero id."""
    if not 0 < codec_id < 256:
        raise ValueError("codec id must be in [1, 255]")
    _REGISTRY[codec_id] = (encode, decode)


def _lookup(codec_id: int):
    try:
        return _REGISTRY[codec_id]
    except KeyError:
        raise Corrupt(f"pass-2 codec {codec_id} is not registered") from None


def pass2_encode(data: bytes, codec: int = DEFAULT_CODEC) -> bytes:
    return _lookup(codec)[0](data)


def pass2_decode(data: bytes, codec: int = DEFAULT_CODEC) -> bytes:
    return _lookup(codec)[1](data)
