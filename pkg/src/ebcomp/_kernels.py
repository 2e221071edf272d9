"""Hot loops compiled with numba when available.

Everything here is written as plain Python over numpy arrays so the module
still works (slowly) without numba.  Keep the arithmetic expressions in the
Lorenzo kernels exactly as written: compression and decompression replay the
same float64 expression, and bit-identical reconstruction depends on it.
numba's default fastmath=False means no FMA contraction is introduced.
"""

from __future__ import annotations

import math

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(func):
            return func

        if args and callable(args[0]):
            return args[0]
        return wrap


# --------------------------------------------------------------------------
# Huffman bitstream kernels (MSB-first packing)
# --------------------------------------------------------------------------

@njit(cache=True)
def huffman_encode_kernel(symbols, lengths, words, out):
    """Pack canonical codes for `symbols` into `out` MSB-first.

    Returns the number of bytes written, or -(i+1) if symbol i has no code.
    `out` must be large enough for the worst case.
    """
    acc = np.uint64(0)
    nbits = 0
    pos = 0
    for i in range(symbols.shape[0]):
        s = symbols[i]
        if s < 0 or s >= lengths.shape[0] or lengths[s] == 0:
            return -(i + 1)
        ln = int(lengths[s])
        acc = (acc << np.uint64(ln)) | np.uint64(words[s])
        nbits += ln
        while nbits >= 8:
            out[pos] = np.uint8((acc >> np.uint64(nbits - 8)) & np.uint64(0xFF))
            pos += 1
            nbits -= 8
    if nbits > 0:
        out[pos] = np.uint8((acc << np.uint64(8 - nbits)) & np.uint64(0xFF))
        pos += 1
    return pos


@njit(cache=True)
def huffman_decode_kernel(stream, n, first_code, first_index, counts, sorted_syms, out):
    """Decode `n` symbols from a canonical-code bitstream.

    Table layout: for each code length L in 1..32, counts[L] symbols exist,
    the numerically first code of length L is first_code[L], and the symbols
    of that length occupy sorted_syms[first_index[L] : first_index[L]+counts[L]]
    in canonical order.  Returns 0 on success, -1 on truncation.
    """
    bitpos = 0
    total_bits = stream.shape[0] * 8
    for i in range(n):
        cur = np.uint32(0)
        ln = 0
        while True:
            if bitpos >= total_bits:
                return -1
            byte = stream[bitpos >> 3]
            bit = (byte >> np.uint8(7 - (bitpos & 7))) & np.uint8(1)
            cur = (cur << np.uint32(1)) | np.uint32(bit)
            bitpos += 1
            ln += 1
            if ln > 32:
                return -1
            if counts[ln] > 0:
                offset = int(cur) - int(first_code[ln])
                if 0 <= offset < counts[ln]:
                    out[i] = sorted_syms[first_index[ln] + offset]
                    break
    return 0


# --------------------------------------------------------------------------
# Lorenzo predictor kernels
#
# One kernel per rank; `compress` selects direction.  In compress mode the
# quantizer runs against `orig`; in decompress mode `orig` is ignored and
# codes/outliers drive the reconstruction.  The prediction expression and
# `pred + e2 * q` reconstruction are shared by both directions.
# --------------------------------------------------------------------------

@njit(cache=True)
def lorenzo_1d(compress, orig, recon, codes, is_out, out_val, e2, radius, bound):
    n = recon.shape[0]
    for x in range(n):
        pred = np.float64(recon[x - 1]) if x > 0 else 0.0
        if compress:
            o = np.float64(orig[x])
            t = (o - pred) / e2
            q = 0
            r = np.float32(0.0)
            outlier = True
            # |t| >= radius - 0.5 already implies |q| >= radius; testing t
            # first keeps the trunc argument inside int64 for any input.
            if abs(t) < np.float64(radius) - 0.5:
                q = math.trunc(t + math.copysign(0.5, t))
                if abs(q) < radius:
                    r = np.float32(pred + e2 * q)
                    if abs(np.float64(r) - o) <= bound:
                        outlier = False
            if outlier:
                codes[x] = 0
                is_out[x] = True
                recon[x] = orig[x]
            else:
                codes[x] = np.int32(q)
                recon[x] = r
        else:
            if is_out[x]:
                recon[x] = out_val[x]
            else:
                recon[x] = np.float32(pred + e2 * np.float64(codes[x]))


@njit(cache=True)
def lorenzo_2d(compress, orig, recon, codes, is_out, out_val, e2, radius, bound):
    ny, nx = recon.shape
    for y in range(ny):
        for x in range(nx):
            a = np.float64(recon[y - 1, x]) if y > 0 else 0.0
            b = np.float64(recon[y, x - 1]) if x > 0 else 0.0
            c = np.float64(recon[y - 1, x - 1]) if (y > 0 and x > 0) else 0.0
            pred = a + b - c
            if compress:
                o = np.float64(orig[y, x])
                t = (o - pred) / e2
                q = 0
                r = np.float32(0.0)
                outlier = True
                if abs(t) < np.float64(radius) - 0.5:
                    q = math.trunc(t + math.copysign(0.5, t))
                    if abs(q) < radius:
                        r = np.float32(pred + e2 * q)
                        if abs(np.float64(r) - o) <= bound:
                            outlier = False
                if outlier:
                    codes[y, x] = 0
                    is_out[y, x] = True
                    recon[y, x] = orig[y, x]
                else:
                    codes[y, x] = np.int32(q)
                    recon[y, x] = r
            else:
                if is_out[y, x]:
                    recon[y, x] = out_val[y, x]
                else:
                    recon[y, x] = np.float32(pred + e2 * np.float64(codes[y, x]))


@njit(cache=True)
def lorenzo_3d(compress, orig, recon, codes, is_out, out_val, e2, radius, bound):
    nz, ny, nx = recon.shape
    for z in range(nz):
        for y in range(ny):
            for x in range(nx):
                a1 = np.float64(recon[z - 1, y, x]) if z > 0 else 0.0
                a2 = np.float64(recon[z, y - 1, x]) if y > 0 else 0.0
                a3 = np.float64(recon[z, y, x - 1]) if x > 0 else 0.0
                a4 = np.float64(recon[z, y - 1, x - 1]) if (y > 0 and x > 0) else 0.0
                a5 = np.float64(recon[z - 1, y, x - 1]) if (z > 0 and x > 0) else 0.0
                a6 = np.float64(recon[z - 1, y - 1, x]) if (z > 0 and y > 0) else 0.0
                a7 = (
                    np.float64(recon[z - 1, y - 1, x - 1])
                    if (z > 0 and y > 0 and x > 0)
                    else 0.0
                )
                pred = a1 + a2 + a3 - a4 - a5 - a6 + a7
                if compress:
                    o = np.float64(orig[z, y, x])
                    t = (o - pred) / e2
                    q = 0
                    r = np.float32(0.0)
                    outlier = True
                    if abs(t) < np.float64(radius) - 0.5:
                        q = math.trunc(t + math.copysign(0.5, t))
                        if abs(q) < radius:
                            r = np.float32(pred + e2 * q)
                            if abs(np.float64(r) - o) <= bound:
                                outlier = False
                    if outlier:
                        codes[z, y, x] = 0
                        is_out[z, y, x] = True
                        recon[z, y, x] = orig[z, y, x]
                    else:
                        codes[z, y, x] = np.int32(q)
                        recon[z, y, x] = r
                else:
                    if is_out[z, y, x]:
                        recon[z, y, x] = out_val[z, y, x]
                    else:
                        recon[z, y, x] = np.float32(
                            pred + e2 * np.float64(codes[z, y, x])
                        )


LORENZO_KERNELS = {1: lorenzo_1d, 2: lorenzo_2d, 3: lorenzo_3d}
