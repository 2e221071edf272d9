"""First-order Lorenzo predictor baseline.

Raster-scan prediction from previously reconstructed neighbors (the signed
corner sum of the unit hypercube behind each point; out-of-grid neighbors
contribute 0), with the same quantize/outlier rules as the interpolation
path but a single global bound and no anchors.  Kept as the comparison
baseline the rate-distortion harness measures against.
"""

from __future__ import annotations

import numpy as np

from .errors import Inconsistent
from .grid import Dims, Grid
from ._kernels import LORENZO_KERNELS
from .predictor import QuantizedField

__all__ = ["lorenzo_predict_quantize", "lorenzo_reconstruct"]


def lorenzo_predict_quantize(grid: Grid, eb: float, radius: int = 512) -> QuantizedField:
    data = grid.data
    extents = grid.dims.extents
    recon = np.zeros(extents, dtype=np.float32)
    codes = np.zeros(extents, dtype=np.int32)
    is_outlier = np.zeros(extents, dtype=bool)
    kernel = LORENZO_KERNELS[grid.dims.rank]
    kernel(True, data, recon, codes, is_outlier, recon, np.float64(2.0 * eb),
           np.int64(radius), np.float64(eb))
    flat_out = np.nonzero(is_outlier.ravel())[0]
    outliers = list(zip(flat_out.tolist(), data.ravel()[flat_out].tolist()))
    return QuantizedField(codes=codes.ravel(), outliers=outliers, anchors=[])


def lorenzo_reconstruct(field: QuantizedField, dims: Dims, eb: float) -> Grid:
    codes_flat = np.ascontiguousarray(field.codes, dtype=np.int32)
    if codes_flat.size != dims.count:
        raise Inconsistent(f"{codes_flat.size} codes for {dims.count} grid points")
    extents = dims.extents
    codes = codes_flat.reshape(extents)
    recon = np.zeros(extents, dtype=np.float32)
    is_outlier = np.zeros(extents, dtype=bool)
    outlier_values = np.zeros(extents, dtype=np.float32)
    if field.outliers:
        oidx = np.asarray([i for i, _ in field.outliers], dtype=np.int64)
        ovals = np.asarray([v for _, v in field.outliers], dtype=np.float32)
        is_outlier.reshape(-1)[oidx] = True
        outlier_values.reshape(-1)[oidx] = ovals
    kernel = LORENZO_KERNELS[dims.rank]
    kernel(False, recon, recon, codes, is_outlier, outlier_values,
           np.float64(2.0 * eb), np.int64(512), np.float64(eb))
    return Grid(dims, recon)
