"""End-to-end compression pipeline: grid in, archive bytes out, and back.

Wires profiling/tuning, the predictor, entropy coding, outlier compaction,
the optional second pass, and the container.  Everything a decoder needs is
in the archive header, so decompress takes only the bytes.
"""

from __future__ import annotations

import dataclasses
import os

import numpy as np

from .archive import (
    Archive,
    EB_ABS,
    EB_REL,
    PREDICTOR_INTERP,
    PREDICTOR_LORENZO,
    compact_outliers,
    expand_outliers,
    parse_archive,
    serialize_archive,
)
from .errors import Corrupt, MalformedSection
from .grid import Dims, Grid, value_range
from .huffman import Codebook, build_codebook, build_histogram, huffman_decode, huffman_encode
from .lorenzo import lorenzo_predict_quantize, lorenzo_reconstruct
from .pass2 import DEFAULT_CODEC
from .predictor import (
    ChunkLayout,
    PredictorConfig,
    QuantizedField,
    _anchor_coords,
    compress_predict,
    count_anchors,
    decompress_predict,
    default_layout,
)
from .tuning import profile_samples, select_config

__all__ = ["compress", "decompress", "thread_count"]

_MODE_IDS = {"abs": EB_ABS, "rel": EB_REL}
_MODE_NAMES = {v: k for k, v in _MODE_IDS.items()}


def thread_count(threads=None) -> int:
    """Resolve a thread count: explicit argument, else EBCOMP_THREADS, else 1."""
    if threads is not None:
        return max(1, int(threads))
    try:
        return max(1, int(os.environ.get("EBCOMP_THREADS", "1")))
    except ValueError:
        return 1


def _field_sections(field: QuantizedField, radius: int):
    anchors = np.asarray([v for _, v in field.anchors], dtype="<f4").tobytes()
    codebook = build_codebook(build_histogram(field.codes, radius))
    bitstream, _ = huffman_encode(field.codes, codebook)
    return anchors, codebook.code_lengths.tobytes(), bitstream, compact_outliers(field.outliers)


def compress(
    grid: Grid,
    eb: float,
    mode: str = "rel",
    predictor: str = "interp",
    pass2: bool = True,
    pass2_codec: int = DEFAULT_CODEC,
    alpha: float = None,
    variants=None,
    dim_order=None,
    quant_radius: int = 512,
    threads: int = None,
) -> bytes:
    """Compress a grid to archive bytes.

    mode "rel" scales eb by the grid's value range; "abs" uses it directly.
    alpha/variants/dim_order default to auto-tuned values; passing any of
    them pins that choice (variants/dim_order as one entry per dimension).
    """
    if mode not in _MODE_IDS:
        raise ValueError(f"unknown error-bound mode {mode!r}")
    if not eb > 0:
        raise ValueError("error bound must be positive")
    threads = thread_count(threads)
    rank = grid.dims.rank
    if predictor == "interp":
        layout = default_layout(rank)
        config = select_config(profile_samples(grid), (mode, eb), layout)
        overrides = {"quant_radius": quant_radius}
        if alpha is not None:
            overrides["alpha"] = float(alpha)
        if variants is not None:
            overrides["cubic_variant_per_dim"] = tuple(variants)
        if dim_order is not None:
            overrides["dim_order"] = tuple(dim_order)
        config = dataclasses.replace(config, **overrides)
        field = compress_predict(grid, config, threads=threads)
        archive = Archive(
            rank=rank,
            extents=grid.dims.extents,
            predictor=PREDICTOR_INTERP,
            eb_mode=_MODE_IDS[mode],
            eb_value=float(eb),
            eb_abs=config.eb_abs,
            alpha=config.alpha,
            variants=config.cubic_variant_per_dim,
            dim_order=config.dim_order,
            quant_radius=config.quant_radius,
            anchor_stride=layout.anchor_stride,
            pass2=bool(pass2),
            pass2_codec=pass2_codec,
            anchors=b"",
            codebook=b"",
            bitstream=b"",
            outliers=b"",
        )
        sections = _field_sections(field, config.quant_radius)
    elif predictor == "lorenzo":
        _, _, rng = value_range(grid)
        if mode == "rel":
            eb_abs = eb * rng if rng > 0 else eb
        else:
            eb_abs = float(eb)
        field = lorenzo_predict_quantize(grid, eb_abs, radius=quant_radius)
        archive = Archive(
            rank=rank,
            extents=grid.dims.extents,
            predictor=PREDICTOR_LORENZO,
            eb_mode=_MODE_IDS[mode],
            eb_value=float(eb),
            eb_abs=eb_abs,
            alpha=1.0,
            variants=(0,) * rank,
            dim_order=tuple(range(rank)),
            quant_radius=quant_radius,
            anchor_stride=0,
            pass2=bool(pass2),
            pass2_codec=pass2_codec,
            anchors=b"",
            codebook=b"",
            bitstream=b"",
            outliers=b"",
        )
        sections = _field_sections(field, quant_radius)
    else:
        raise ValueError(f"unknown predictor {predictor!r}")
    anchors, codebook, bitstream, outliers = sections
    archive = dataclasses.replace(
        archive, anchors=anchors, codebook=codebook, bitstream=bitstream, outliers=outliers
    )
    return serialize_archive(archive)


def _layout_for(rank: int, stride: int) -> ChunkLayout:
    default = default_layout(rank)
    if stride == default.anchor_stride:
        return default
    return ChunkLayout(anchor_stride=stride, rank=rank, super_chunk_extents=(stride,) * rank)


def decompress(data: bytes, threads: int = None) -> Grid:
    """Decode archive bytes back to a grid; all settings come from the header."""
    threads = thread_count(threads)
    a = parse_archive(data)
    dims = Dims(a.extents)
    if len(a.codebook) != 2 * a.quant_radius:
        raise MalformedSection(
            f"codebook holds {len(a.codebook)} lengths for radius {a.quant_radius}"
        )
    codebook = Codebook.from_lengths(np.frombuffer(a.codebook, dtype=np.uint8))
    codes = huffman_decode(a.bitstream, codebook, dims.count)
    outliers = expand_outliers(a.outliers)
    if a.predictor == PREDICTOR_INTERP:
        layout = _layout_for(a.rank, a.anchor_stride)
        expected = count_anchors(dims, a.anchor_stride)
        values = np.frombuffer(a.anchors, dtype="<f4")
        if values.size != expected:
            raise MalformedSection(
                f"anchor section holds {values.size} values, lattice needs {expected}"
            )
        acoords = _anchor_coords(dims.extents, a.anchor_stride)
        mesh = np.meshgrid(*acoords, indexing="ij")
        idx = np.ravel_multi_index(mesh, dims.extents).ravel()
        field = QuantizedField(
            codes=codes, outliers=outliers, anchors=list(zip(idx.tolist(), values.tolist()))
        )
        config = PredictorConfig(
            layout=layout,
            alpha=a.alpha,
            cubic_variant_per_dim=a.variants,
            dim_order=a.dim_order,
            eb_abs=a.eb_abs,
            quant_radius=a.quant_radius,
        )
        return decompress_predict(field, config, dims, threads=threads)
    if a.predictor == PREDICTOR_LORENZO:
        field = QuantizedField(codes=codes, outliers=outliers, anchors=[])
        return lorenzo_reconstruct(field, dims, a.eb_abs)
    raise Corrupt(f"unknown predictor id {a.predictor}")
