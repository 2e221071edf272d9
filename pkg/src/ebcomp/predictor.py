"""Anchored multi-level interpolation predictor with synchronized quantization.

Compression seeds a reconstruction buffer with losslessly-stored anchor
values on a coarse lattice, then sweeps levels coarse-to-fine: level with
stride s predicts the midpoints between already-reconstructed points that
are 2s apart, one axis-aligned pass per dimension.  Each prediction is a
1D spline over up to four neighbors at offsets {-3s, -s, +s, +3s} along
the pass dimension; the quantizer turns the residual into a small integer
code.  Decompression replays the identical prediction arithmetic driven by
the stored codes, which makes the two reconstruction buffers bit-identical.

Determinism contract: predictions are computed in float64 with one fixed
expression shape (missing neighbors enter as 0.0 under a 0.0 weight), the
reconstruction buffer is float32, and a neighbor only counts as available
when it lies inside the grid AND inside the predicted point's super-chunk
view (its tile plus one closing plane per dimension).  Nothing a pass
writes is read by that same pass, so points may be computed in any order
or thread split with byte-identical results.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import Inconsistent, InvalidStride, NoNeighbor
from .grid import Dims, Grid

__all__ = [
    "NOTAKNOT",
    "NATURAL",
    "ChunkLayout",
    "LevelStep",
    "LevelPlan",
    "PredictorConfig",
    "QuantizedField",
    "Code",
    "Outlier",
    "OUTLIER",
    "default_layout",
    "plan_levels",
    "count_anchors",
    "gather_anchors",
    "spline_predict",
    "quantize",
    "interpolate_level",
    "Compress",
    "Decompress",
    "compress_predict",
    "decompress_predict",
]

NOTAKNOT = 0
NATURAL = 1

# Weight vectors over neighbor offsets (-3s, -s, +s, +3s).  Unavailable
# neighbors keep a 0.0 weight and contribute a literal 0.0 operand so every
# prediction runs the same four-term expression.
CUBIC_WEIGHTS = {
    NOTAKNOT: (-1.0 / 16.0, 9.0 / 16.0, 9.0 / 16.0, -1.0 / 16.0),
    NATURAL: (-3.0 / 40.0, 23.0 / 40.0, 23.0 / 40.0, -3.0 / 40.0),
}
QUAD_LEFT = (-1.0 / 8.0, 6.0 / 8.0, 3.0 / 8.0, 0.0)
QUAD_RIGHT = (0.0, 3.0 / 8.0, 6.0 / 8.0, -1.0 / 8.0)
LINEAR = (0.0, 0.5, 0.5, 0.0)
COPY = (0.0, 1.0, 0.0, 0.0)

_DEFAULT_STRIDE = {1: 512, 2: 16, 3: 8}
_DEFAULT_TILES = {1: (512,), 2: (16, 16), 3: (8, 8, 32)}


def _is_pow2(n: int) -> bool:
    return n >= 2 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class ChunkLayout:
    """Anchor stride plus the super-chunk tile that confines neighbor reads."""

    anchor_stride: int
    rank: int
    super_chunk_extents: tuple

    def __post_init__(self):
        if not _is_pow2(self.anchor_stride):
            raise InvalidStride(f"anchor stride {self.anchor_stride} is not a power of two")
        if len(self.super_chunk_extents) != self.rank:
            raise Inconsistent("super-chunk extents do not match rank")
        for e in self.super_chunk_extents:
            if e < self.anchor_stride or e % self.anchor_stride:
                raise Inconsistent(
                    f"super-chunk extent {e} is not a multiple of the anchor stride"
                )


def default_layout(rank: int) -> ChunkLayout:
    """Stride 8 and 8x8x32 tiles for 3D, 16/16x16 for 2D, 512 for 1D."""
    return ChunkLayout(
        anchor_stride=_DEFAULT_STRIDE[rank],
        rank=rank,
        super_chunk_extents=_DEFAULT_TILES[rank],
    )


@dataclass(frozen=True)
class LevelStep:
    level: int  # log2(stride) + 1
    stride: int
    eb: float


@dataclass(frozen=True)
class LevelPlan:
    levels: tuple  # execution order, coarsest stride first
    global_eb: float
    alpha: float


def plan_levels(anchor_stride: int, eb: float, alpha: float) -> LevelPlan:
    """Level schedule with per-level bounds eb / alpha**(level-1).

    The finest level (stride 1) carries the full user bound; coarser levels
    tighten it so their errors cannot compound past it.
    """
    if not _is_pow2(anchor_stride):
        raise InvalidStride(f"anchor stride {anchor_stride} is not a power of two")
    steps = []
    stride = anchor_stride // 2
    while stride >= 1:
        level = stride.bit_length()  # log2(stride) + 1
        steps.append(LevelStep(level=level, stride=stride, eb=eb / alpha ** (level - 1)))
        stride //= 2
    return LevelPlan(levels=tuple(steps), global_eb=eb, alpha=alpha)


@dataclass(frozen=True)
class PredictorConfig:
    layout: ChunkLayout
    alpha: float
    cubic_variant_per_dim: tuple
    dim_order: tuple
    eb_abs: float
    quant_radius: int = 512

    def __post_init__(self):
        rank = self.layout.rank
        if sorted(self.dim_order) != list(range(rank)):
            raise Inconsistent(f"dim_order {self.dim_order} is not a permutation")
        if len(self.cubic_variant_per_dim) != rank:
            raise Inconsistent("one cubic variant per dimension required")
        if self.quant_radius < 2:
            raise Inconsistent("quantizer radius must be at least 2")
        if not self.eb_abs > 0:
            raise Inconsistent("absolute error bound must be positive")


@dataclass(frozen=True, eq=False)
class QuantizedField:
    """Dense quant-codes plus the sparse lossless side channels.

    codes is flat and aligned with Grid indexing; anchor and outlier
    positions hold code 0.  Outliers are (flat index, original value) with
    strictly increasing indices; anchors likewise, in lattice order.
    """

    codes: np.ndarray
    outliers: list
    anchors: list


@dataclass(frozen=True)
class Code:
    q: int


@dataclass(frozen=True)
class Outlier:
    pass


OUTLIER = Outlier()


def quantize(original: float, predicted: float, level_eb: float, radius: int):
    """Quantize a residual to Code(q) or OUTLIER when |q| reaches radius.

    q counts steps of 2*level_eb with half-away-from-zero rounding, so the
    reconstruction predicted + 2*level_eb*q sits within level_eb of the
    original (in real arithmetic) whenever a Code is returned.
    """
    t = (float(original) - float(predicted)) / (2.0 * float(level_eb))
    q = math.trunc(t + math.copysign(0.5, t))
    if abs(q) >= radius:
        return OUTLIER
    return Code(q)


def spline_predict(neighbors, cubic_variant: int = NOTAKNOT) -> float:
    """Predict from up to four neighbors at offsets (-3s, -s, +s, +3s).

    neighbors is a length-4 sequence; None marks an unavailable neighbor.
    Availability selects the spline: all four -> cubic (chosen variant),
    three -> quadratic on whichever side is present, {-s,+s} -> linear,
    {-s} alone -> copy.  The -s neighbor is always required.
    """
    m3, m1, p1, p3 = (v is not None for v in neighbors)
    if not m1:
        raise NoNeighbor("the -s neighbor is required; traversal order guarantees it")
    if m3 and p1 and p3:
        w = CUBIC_WEIGHTS[cubic_variant]
    elif m3 and p1:
        w = QUAD_LEFT
    elif p1 and p3:
        w = QUAD_RIGHT
    elif p1:
        w = LINEAR
    else:
        w = COPY
    v = [0.0 if n is None else float(n) for n in neighbors]
    return ((w[0] * v[0] + w[1] * v[1]) + w[2] * v[2]) + w[3] * v[3]


# --------------------------------------------------------------------------
# Anchor lattice
# --------------------------------------------------------------------------

def _anchor_axis(extent: int, stride: int) -> np.ndarray:
    """Multiples of stride, closed with the last in-grid coordinate."""
    coords = list(range(0, extent, stride))
    if coords[-1] != extent - 1:
        coords.append(extent - 1)
    return np.asarray(coords, dtype=np.int64)


def _anchor_coords(extents, stride: int):
    return tuple(_anchor_axis(e, stride) for e in extents)


def count_anchors(dims: Dims, stride: int) -> int:
    """Anchor count for a dims descriptor without touching any data."""
    n = 1
    for axis in _anchor_coords(dims.extents, stride):
        n *= axis.size
    return n


def gather_anchors(grid: Grid, stride: int):
    """(flat index, value) for every anchor point, ascending flat index."""
    coords = _anchor_coords(grid.dims.extents, stride)
    mesh = np.meshgrid(*coords, indexing="ij")
    idx = np.ravel_multi_index(mesh, grid.dims.extents).ravel()
    values = grid.data[np.ix_(*coords)].ravel()
    return list(zip(idx.tolist(), values.tolist()))


# --------------------------------------------------------------------------
# Level execution
# --------------------------------------------------------------------------

@dataclass
class Compress:
    """Quantize against `source` while reconstructing; fills codes/outliers."""

    source: np.ndarray
    codes: np.ndarray
    is_outlier: np.ndarray
    anchor_block: np.ndarray


@dataclass
class Decompress:
    """Reconstruct from stored codes and outlier values."""

    codes: np.ndarray
    is_outlier: np.ndarray
    outlier_values: np.ndarray
    anchor_block: np.ndarray


def _run_pass(recon, coords, d, stride, level_eb, config, mode):
    """One (level, dimension) pass over the point set given by `coords`.

    Points are grouped by which neighbors are available — the masks depend
    only on the coordinate along d — and each group is predicted with one
    vectorized four-term weighted sum.
    """
    s = stride
    extent = recon.shape[d]
    tile = config.layout.super_chunk_extents[d]
    pd = coords[d]
    offset = pd % tile
    # -s is always available: pass coordinates are odd multiples of s, so
    # offset >= s inside the tile and pd - s >= 0 in the grid.
    m3 = offset >= 3 * s
    p1 = pd + s <= extent - 1  # the +s read never leaves the view
    p3 = (offset <= tile - 3 * s) & (pd + 3 * s <= extent - 1)
    cases = (
        (m3 & p1 & p3, CUBIC_WEIGHTS[config.cubic_variant_per_dim[d]], (1, 1, 1, 1)),
        (m3 & p1 & ~p3, QUAD_LEFT, (1, 1, 1, 0)),
        (~m3 & p1 & p3, QUAD_RIGHT, (0, 1, 1, 1)),
        (~m3 & p1 & ~p3, LINEAR, (0, 1, 1, 0)),
        (~p1, COPY, (0, 1, 0, 0)),
    )
    offsets = (-3 * s, -s, s, 3 * s)
    e2 = 2.0 * level_eb
    radius = config.quant_radius
    for mask, w, avail in cases:
        sel = pd[mask]
        if sel.size == 0:
            continue
        target = list(coords)
        target[d] = sel
        ix = np.ix_(*target)
        terms = []
        for i in range(4):
            if avail[i]:
                src = list(coords)
                src[d] = sel + offsets[i]
                terms.append(recon[np.ix_(*src)].astype(np.float64))
            else:
                terms.append(0.0)
        pred = ((w[0] * terms[0] + w[1] * terms[1]) + w[2] * terms[2]) + w[3] * terms[3]
        if isinstance(mode, Compress):
            o32 = mode.source[ix]
            o = o32.astype(np.float64)
            t = (o - pred) / e2
            qf = np.trunc(t + np.copysign(0.5, t))
            big = np.abs(qf) >= radius
            q = np.where(big, 0.0, qf).astype(np.int32)
            rec = (pred + e2 * q.astype(np.float64)).astype(np.float32)
            # The code only stands if the float32 reconstruction actually
            # lands within the level bound; otherwise store the original.
            bad = big | (np.abs(rec.astype(np.float64) - o) > level_eb)
            recon[ix] = np.where(bad, o32, rec)
            mode.codes[ix] = np.where(bad, np.int32(0), q)
            mode.is_outlier[ix] = bad
        else:
            q = mode.codes[ix].astype(np.float64)
            rec = (pred + e2 * q).astype(np.float32)
            out = mode.is_outlier[ix]
            recon[ix] = np.where(out, mode.outlier_values[ix], rec)


def _split_pass(recon, coords, d, stride, level_eb, config, mode, threads):
    chunks = min(threads, coords[0].size)
    if chunks <= 1:
        _run_pass(recon, coords, d, stride, level_eb, config, mode)
        return
    # Slabs along axis 0 write disjoint points and read none of them, so any
    # split gives byte-identical output.
    bounds = np.linspace(0, coords[0].size, chunks + 1).astype(int)
    with ThreadPoolExecutor(max_workers=chunks) as pool:
        futures = []
        for a, b in zip(bounds[:-1], bounds[1:]):
            sub = list(coords)
            sub[0] = coords[0][a:b]
            futures.append(
                pool.submit(_run_pass, recon, sub, d, stride, level_eb, config, mode)
            )
        for f in futures:
            f.result()


def interpolate_level(recon, level: LevelStep, config: PredictorConfig, mode, threads: int = 1):
    """Run this level's per-dimension passes; recon must hold lattice 2s.

    After each pass the anchor block is written back: an anchor whose
    coordinate happens to sit on the pass lattice gets transiently predicted
    over, and nothing may read that slot before the restore.
    """
    extents = recon.shape
    rank = len(extents)
    s = level.stride
    anchor_ix = np.ix_(*_anchor_coords(extents, config.layout.anchor_stride))
    passed = []
    for d in config.dim_order:
        pd = np.arange(s, extents[d], 2 * s)
        if pd.size:
            coords = []
            for axis in range(rank):
                if axis == d:
                    coords.append(pd)
                elif axis in passed:
                    coords.append(np.arange(0, extents[axis], s))
                else:
                    coords.append(np.arange(0, extents[axis], 2 * s))
            _split_pass(recon, coords, d, s, level.eb, config, mode, threads)
            recon[anchor_ix] = mode.anchor_block
        passed.append(d)


def compress_predict(grid: Grid, config: PredictorConfig, threads: int = 1) -> QuantizedField:
    """Predict/quantize every non-anchor point; anchors are stored verbatim."""
    data = grid.data
    extents = grid.dims.extents
    acoords = _anchor_coords(extents, config.layout.anchor_stride)
    anchor_ix = np.ix_(*acoords)
    recon = np.zeros(extents, dtype=np.float32)
    anchor_block = data[anchor_ix].copy()
    recon[anchor_ix] = anchor_block
    codes = np.zeros(extents, dtype=np.int32)
    is_outlier = np.zeros(extents, dtype=bool)
    mode = Compress(
        source=data, codes=codes, is_outlier=is_outlier, anchor_block=anchor_block
    )
    plan = plan_levels(config.layout.anchor_stride, config.eb_abs, config.alpha)
    for step in plan.levels:
        interpolate_level(recon, step, config, mode, threads=threads)
    # Anchors are lossless by definition; drop any code the passes left on a
    # lattice collision.
    codes[anchor_ix] = 0
    is_outlier[anchor_ix] = False
    flat_out = np.nonzero(is_outlier.ravel())[0]
    outliers = list(zip(flat_out.tolist(), data.ravel()[flat_out].tolist()))
    return QuantizedField(
        codes=codes.ravel(), outliers=outliers, anchors=gather_anchors(grid, config.layout.anchor_stride)
    )


def decompress_predict(
    field: QuantizedField, config: PredictorConfig, dims: Dims, threads: int = 1
) -> Grid:
    """Replay the prediction from codes; bit-identical to the compressor."""
    extents = dims.extents
    codes_flat = np.ascontiguousarray(field.codes, dtype=np.int32)
    if codes_flat.size != dims.count:
        raise Inconsistent(
            f"{codes_flat.size} codes for {dims.count} grid points"
        )
    acoords = _anchor_coords(extents, config.layout.anchor_stride)
    mesh = np.meshgrid(*acoords, indexing="ij")
    expected_idx = np.ravel_multi_index(mesh, extents).ravel()
    if field.anchors:
        got_idx = np.asarray([i for i, _ in field.anchors], dtype=np.int64)
    else:
        got_idx = np.empty(0, dtype=np.int64)
    if not np.array_equal(got_idx, expected_idx):
        raise Inconsistent("anchor indices do not match the lattice for these dims")
    block_shape = tuple(c.size for c in acoords)
    anchor_block = np.asarray(
        [v for _, v in field.anchors], dtype=np.float32
    ).reshape(block_shape)
    recon = np.zeros(extents, dtype=np.float32)
    recon[np.ix_(*acoords)] = anchor_block
    codes = codes_flat.reshape(extents)
    is_outlier = np.zeros(extents, dtype=bool)
    outlier_values = np.zeros(extents, dtype=np.float32)
    if field.outliers:
        oidx = np.asarray([i for i, _ in field.outliers], dtype=np.int64)
        ovals = np.asarray([v for _, v in field.outliers], dtype=np.float32)
        is_outlier.reshape(-1)[oidx] = True
        outlier_values.reshape(-1)[oidx] = ovals
    mode = Decompress(
        codes=codes,
        is_outlier=is_outlier,
        outlier_values=outlier_values,
        anchor_block=anchor_block,
    )
    plan = plan_levels(config.layout.anchor_stride, config.eb_abs, config.alpha)
    for step in plan.levels:
        interpolate_level(recon, step, config, mode, threads=threads)
    return Grid(dims, recon)
