#!/usr/bin/env python3
"""Compress a float32 field, get it back, and check what it cost us.

Runs against a synthetic turbulence-ish field by default; point it at a raw
file with --input/--dims to use real data.
"""

import argparse

import numpy as np

from ebcomp import (
    Dims,
    Grid,
    compress,
    decompress,
    load_raw,
    parse_archive,
    psnr,
    verify_error_bound,
)


def synthetic_field(n=64):
    z, y, x = np.mgrid[0:n, 0:n, 0:n].astype(np.float64)
    f = (
        np.sin(2 * np.pi * z / 17.0)
        + 0.6 * np.cos(2 * np.pi * (y + 0.3 * x) / 23.0)
        + 0.2 * np.sin(2 * np.pi * x / 5.0)
    )
    return Grid(Dims((n, n, n)), f.astype(np.float32))


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--input", help="raw little-endian float32 file")
    ap.add_argument("--dims", type=int, nargs="+", help="extents, slowest first")
    ap.add_argument("--mode", choices=["abs", "rel"], default="rel")
    args = ap.parse_args()

    if args.input:
        grid = load_raw(args.input, Dims(tuple(args.dims)))
    else:
        grid = synthetic_field()
    raw_bytes = 4 * grid.dims.count
    print(f"field: dims {list(grid.dims.extents)}, {raw_bytes} bytes raw")

    for eb in (1e-2, 1e-3, 1e-4):
        blob = compress(grid, eb, mode=args.mode)
        back = decompress(blob)

        header = parse_archive(blob)
        report = verify_error_bound(grid, back, header.eb_abs)
        assert report.ok, "bound violated -- this would be a bug"

        cr = raw_bytes / len(blob)
        print(
            f"eb={eb:g} ({args.mode}): {len(blob)} bytes, "
            f"CR={cr:.1f}, {32.0 / cr:.3f} bits/value, "
            f"max_err={report.max_abs_err:.3e} (bound {header.eb_abs:.3e}), "
            f"psnr={psnr(grid, back):.1f} dB"
        )


if __name__ == "__main__":
    main()
