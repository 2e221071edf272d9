"""Command-line interface.

Raw inputs are headerless little-endian float32 with dimensions given
slowest-first via -d/--dims.  Exit codes: 0 success, 2 usage, 3 I/O,
4 malformed input/archive, 5 bound verification failure.
"""

from __future__ import annotations

import argparse
import sys

from .archive import parse_archive
from .errors import EbcompError, IoFailure, VerificationFailed
from .grid import Dims, Grid, load_raw, store_raw, value_range
from .metrics import (
    bit_rate,
    compression_ratio,
    psnr,
    rd_sweep,
    verify_error_bound,
    write_records_csv,
    write_records_jsonl,
)
from .pipeline import compress, decompress

_VARIANT_NAMES = {0: "notaknot", 1: "natural"}
_VARIANT_IDS = {v: k for k, v in _VARIANT_NAMES.items()}


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"{text} is not a positive number")
    return value


def _read_bytes(path: str) -> bytes:
    try:
        with open(path, "rb") as handle:
            return handle.read()
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc


def _write_bytes(path: str, data: bytes) -> None:
    try:
        with open(path, "wb") as handle:
            handle.write(data)
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def _dims(args) -> Dims:
    return Dims(tuple(args.dims))


def cmd_compress(args) -> int:
    grid = load_raw(args.input, _dims(args))
    variants = [_VARIANT_IDS[v] for v in args.variants] if args.variants else None
    blob = compress(
        grid,
        args.eb,
        mode=args.mode,
        predictor=args.predictor,
        pass2=args.pass2 == "on",
        alpha=args.alpha,
        variants=variants,
        dim_order=args.dim_order,
    )
    out = args.output or args.input + ".csz"
    _write_bytes(out, blob)
    a = parse_archive(blob)
    cr = compression_ratio(4 * grid.dims.count, len(blob))
    named = " ".join(_VARIANT_NAMES[v] for v in a.variants)
    print(
        f"{out}: {len(blob)} bytes CR={cr:.2f} bit_rate={bit_rate(cr):.4f} "
        f"predictor={args.predictor} eb={a.eb_value:g} ({args.mode}) "
        f"eb_abs={a.eb_abs:.6g} alpha={a.alpha:g} variants=[{named}] "
        f"dim_order={list(a.dim_order)} pass2={args.pass2}"
    )
    return 0


def cmd_decompress(args) -> int:
    grid = decompress(_read_bytes(args.archive))
    store_raw(grid, args.output)
    print(f"{args.output}: {4 * grid.dims.count} bytes, dims {list(grid.dims.extents)}")
    return 0


def cmd_verify(args) -> int:
    dims = _dims(args)
    original = load_raw(args.original, dims)
    decompressed = load_raw(args.decompressed, dims)
    if args.mode == "rel":
        _, _, rng = value_range(original)
        eb_abs = args.eb * rng if rng > 0 else args.eb
    else:
        eb_abs = args.eb
    report = verify_error_bound(original, decompressed, eb_abs)
    print(
        f"max_abs_err={report.max_abs_err:.6g} eb_abs={eb_abs:.6g} "
        f"psnr={psnr(original, decompressed):.4f} violations={report.violations}"
    )
    if report.violations:
        print(f"first violation at flat index {report.first_violation}", file=sys.stderr)
        return 5
    return 0


def cmd_sweep(args) -> int:
    grid = load_raw(args.input, _dims(args))
    pass2_settings = {"on": [True], "off": [False], "both": [True, False]}[args.pass2]
    records = []
    for predictor in dict.fromkeys(args.predictor):
        for pass2 in pass2_settings:
            records.extend(
                rd_sweep(
                    grid,
                    predictor,
                    args.eb,
                    pass2,
                    mode=args.mode,
                    dataset=args.input,
                )
            )
    records.sort(key=lambda r: (r.predictor, r.bit_rate))
    writer = write_records_csv if args.report == "csv" else write_records_jsonl
    if args.output:
        with open(args.output, "w", newline="") as handle:
            writer(records, handle)
        print(f"{args.output}: {len(records)} rows")
    else:
        writer(records, sys.stdout)
    return 0


def cmd_info(args) -> int:
    a = parse_archive(_read_bytes(args.archive))
    mode = {0: "abs", 1: "rel"}.get(a.eb_mode, str(a.eb_mode))
    predictor = {0: "interp", 1: "lorenzo"}.get(a.predictor, str(a.predictor))
    print(f"dims {list(a.extents)} rank {a.rank}")
    print(f"predictor {predictor}")
    print(f"eb {a.eb_value:g} ({mode}) eb_abs {a.eb_abs:.6g} alpha {a.alpha:g}")
    if a.predictor == 0:
        named = " ".join(_VARIANT_NAMES.get(v, str(v)) for v in a.variants)
        print(f"variants [{named}] dim_order {list(a.dim_order)} anchor_stride {a.anchor_stride}")
    print(f"quant_radius {a.quant_radius} pass2 {'on' if a.pass2 else 'off'} codec {a.pass2_codec}")
    print(
        "sections: anchors %d codebook %d bitstream %d outliers %d"
        % (len(a.anchors), len(a.codebook), len(a.bitstream), len(a.outliers))
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ebcomp", description="Error-bounded lossy compressor for float32 grids."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_dims(p):
        p.add_argument(
            "-d", "--dims", type=int, nargs="+", required=True, metavar="N",
            help="grid extents, slowest dimension first (1-3 values)",
        )

    p = sub.add_parser("compress", help="compress a raw float32 file")
    p.add_argument("input")
    add_dims(p)
    p.add_argument("--eb", type=_positive_float, required=True, help="error bound")
    p.add_argument("--mode", choices=["abs", "rel"], default="rel")
    p.add_argument("--predictor", choices=["interp", "lorenzo"], default="interp")
    p.add_argument("--pass2", choices=["on", "off"], default="on")
    p.add_argument("--alpha", type=_positive_float, help="pin the level-bound growth factor")
    p.add_argument(
        "--variants", nargs="+", choices=sorted(_VARIANT_IDS),
        help="pin per-dimension cubic variants",
    )
    p.add_argument("--dim-order", nargs="+", type=int, help="pin the dimension pass order")
    p.add_argument("-o", "--output", help="archive path (default: INPUT.csz)")
    p.set_defaults(run=cmd_compress)

    p = sub.add_parser("decompress", help="decompress an archive to raw float32")
    p.add_argument("archive")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(run=cmd_decompress)

    p = sub.add_parser("verify", help="check a decompressed file against the original")
    p.add_argument("original")
    p.add_argument("decompressed")
    add_dims(p)
    p.add_argument("--eb", type=_positive_float, required=True)
    p.add_argument("--mode", choices=["abs", "rel"], default="rel")
    p.set_defaults(run=cmd_verify)

    p = sub.add_parser("sweep", help="rate-distortion sweep over error bounds")
    p.add_argument("input")
    add_dims(p)
    p.add_argument("--eb", type=_positive_float, nargs="+", required=True)
    p.add_argument("--mode", choices=["abs", "rel"], default="rel")
    p.add_argument(
        "--predictor", nargs="+", choices=["interp", "lorenzo"],
        default=["interp", "lorenzo"],
    )
    p.add_argument("--pass2", choices=["on", "off", "both"], default="both")
    p.add_argument("--report", choices=["csv", "jsonl"], default="csv")
    p.add_argument("-o", "--output", help="report path (default: stdout)")
    p.set_defaults(run=cmd_sweep)

    p = sub.add_parser("info", help="print archive header fields")
    p.add_argument("archive")
    p.set_defaults(run=cmd_info)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except (IoFailure, OSError) as exc:
        print(f"ebcomp: {exc}", file=sys.stderr)
        return 3
    except VerificationFailed as exc:
        print(f"ebcomp: {exc}", file=sys.stderr)
        return 5
    except (EbcompError, ValueError) as exc:
        print(f"ebcomp: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
