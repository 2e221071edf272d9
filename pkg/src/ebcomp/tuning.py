"""Input profiling and parameter selection.

A handful of interior points (at most 4 per dimension, so <= 64 in 3D) are
sampled before compression.  At each one, both cubic spline variants are
evaluated at unit stride along every profilable dimension against the true
value; the accumulated errors pick the per-dimension variant and order the
dimension passes least-smooth-first.  The level-bound growth factor alpha
comes from a fixed piecewise-linear map of the relative error bound.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Grid, value_range
from .predictor import CUBIC_WEIGHTS, NATURAL, NOTAKNOT, ChunkLayout, PredictorConfig

__all__ = ["ProfileStats", "profile_samples", "compute_alpha", "select_config"]


@dataclass(frozen=True, eq=False)
class ProfileStats:
    value_min: float
    value_max: float
    value_range: float
    err_sum: np.ndarray  # (rank, 2) float64; columns NOTAKNOT, NATURAL
    sample_count: np.ndarray  # (rank,) int64


def _sample_axis(extent: int) -> list:
    """Uniform interior coordinates keeping +-3 neighbors in range."""
    k = min(4, extent // 7)
    coords = []
    for j in range(k):
        c = (j + 1) * extent // (k + 1)
        coords.append(min(max(c, 3), extent - 4))
    return coords


def profile_samples(grid: Grid) -> ProfileStats:
    data = grid.data
    extents = grid.dims.extents
    rank = grid.dims.rank
    mn, mx, rng = value_range(grid)
    err_sum = np.zeros((rank, 2), dtype=np.float64)
    sample_count = np.zeros(rank, dtype=np.int64)
    per_axis = [_sample_axis(e) for e in extents]
    profiled = [d for d in range(rank) if per_axis[d]]
    # Dimensions too short to profile still need a coordinate so the sample
    # points of the other dimensions are well-defined.
    points = [per_axis[d] if per_axis[d] else [extents[d] // 2] for d in range(rank)]
    mesh = np.meshgrid(*points, indexing="ij")
    for point in zip(*(m.ravel() for m in mesh)):
        for d in profiled:
            values = []
            for off in (-3, -1, 1, 3):
                at = list(point)
                at[d] += off
                values.append(float(data[tuple(at)]))
            actual = float(data[tuple(point)])
            for variant in (NOTAKNOT, NATURAL):
                w = CUBIC_WEIGHTS[variant]
                pred = ((w[0] * values[0] + w[1] * values[1]) + w[2] * values[2]) + w[3] * values[3]
                err_sum[d, variant] += abs(pred - actual)
            sample_count[d] += 1
    return ProfileStats(
        value_min=mn,
        value_max=mx,
        value_range=rng,
        err_sum=err_sum,
        sample_count=sample_count,
    )


# (relative bound, alpha) knots, descending; linear between, clamped outside.
_ALPHA_KNOTS = ((1e-1, 2.0), (1e-2, 1.75), (1e-3, 1.5), (1e-4, 1.25), (1e-5, 1.0))


def compute_alpha(rel_eb: float) -> float:
    """Level-bound growth factor as a function of the relative error bound."""
    if rel_eb >= _ALPHA_KNOTS[0][0]:
        return _ALPHA_KNOTS[0][1]
    if rel_eb <= _ALPHA_KNOTS[-1][0]:
        return _ALPHA_KNOTS[-1][1]
    for (hi_e, hi_a), (lo_e, lo_a) in zip(_ALPHA_KNOTS, _ALPHA_KNOTS[1:]):
        if rel_eb >= lo_e:
            return lo_a + (hi_a - lo_a) * (rel_eb - lo_e) / (hi_e - lo_e)
    raise AssertionError("unreachable")


def select_config(stats: ProfileStats, eb_mode, layout: ChunkLayout) -> PredictorConfig:
    """Resolve the absolute bound and pick alpha/variants/dimension order.

    eb_mode is ("abs", value) or ("rel", value).  In abs mode the relative
    bound driving alpha is value/range; zero-range data resolves rel<->abs
    with factor 1 (such data compresses exactly regardless).
    """
    kind, value = eb_mode
    rng = stats.value_range
    if kind == "abs":
        eb_abs = float(value)
        rel = eb_abs / rng if rng > 0 else eb_abs
    elif kind == "rel":
        rel = float(value)
        eb_abs = rel * rng if rng > 0 else rel
    else:
        raise ValueError(f"unknown error-bound mode {kind!r}")
    rank = layout.rank
    variants = tuple(
        NOTAKNOT if stats.err_sum[d, NOTAKNOT] <= stats.err_sum[d, NATURAL] else NATURAL
        for d in range(rank)
    )
    # Least smooth first, by mean profiled error; unprofiled dimensions last,
    # ties toward the lower dimension index.
    def order_key(d):
        count = int(stats.sample_count[d])
        mean = float(stats.err_sum[d].sum()) / count if count else 0.0
        return (count == 0, -mean, d)

    dim_order = tuple(sorted(range(rank), key=order_key))
    return PredictorConfig(
        layout=layout,
        alpha=compute_alpha(rel),
        cubic_variant_per_dim=variants,
        dim_order=dim_order,
        eb_abs=eb_abs,
    )
