"""N-dimensional float32 grid model and raw binary file I/O.

A grid is the unit of compression: up to three dimensions of 32-bit
IEEE-754 floats, dimensions listed slowest-varying first (the last listed
dimension is contiguous in memory).  Raw files are headerless little-endian
binary32 in row-major order; dimensions always travel out-of-band.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import IoFailure, NonFiniteValue, SizeMismatch


@dataclass(frozen=True)
class Dims:
    """Grid dimensions, slowest-varying first."""

    extents: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "extents", tuple(int(e) for e in self.extents))
        if not 1 <= len(self.extents) <= 3:
            raise ValueError(f"rank must be 1..3, got {len(self.extents)}")
        if any(e < 1 for e in self.extents):
            raise ValueError(f"extents must be positive, got {self.extents}")

    @property
    def rank(self) -> int:
        return len(self.extents)

    @property
    def count(self) -> int:
        return math.prod(self.extents)


@dataclass
class Grid:
    """A finite float32 array with explicit dimensions.

    `data` is the C-ordered shaped array; `values` exposes the flat view
    the rest of the pipeline indexes with flat positions.
    """

    dims: Dims
    data: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.ascontiguousarray(self.data, dtype=np.float32)
        if arr.size != self.dims.count:
            raise SizeMismatch(
                f"{arr.size} values for dims {self.dims.extents} "
                f"({self.dims.count} expected)"
            )
        arr = arr.reshape(self.dims.extents)
        finite = np.isfinite(arr.ravel())
        if not finite.all():
            raise NonFiniteValue(int(np.argmin(finite)))
        self.data = arr

    @property
    def values(self) -> np.ndarray:
        """Flat row-major float32 view of the data."""
        return self.data.ravel()

    def __eq__(self, other) -> bool:
        if not isinstance(other, Grid):
            return NotImplemented
        # Bit-exact comparison: -0.0 and 0.0 are different grids.
        return self.dims == other.dims and self.data.tobytes() == other.data.tobytes()


def load_raw(path, dims: Dims) -> Grid:
    """Read a headerless little-endian binary32 raw file as a Grid.

    The file length must be exactly 4 bytes per element; NaN/Inf values are
    rejected (quantization and PSNR are undefined on them).
    """
    try:
        with open(path, "rb") as f:
            raw = f.read()
    except OSError as e:
        raise IoFailure(f"cannot read {path}: {e}") from e
    expected = 4 * dims.count
    if len(raw) != expected:
        raise SizeMismatch(f"{path}: {len(raw)} bytes, dims need {expected}")
    values = np.frombuffer(raw, dtype="<f4").astype(np.float32, copy=True)
    return Grid(dims, values)


def store_raw(grid: Grid, path) -> None:
    """Write a Grid as headerless little-endian binary32; inverse of load_raw."""
    try:
        with open(path, "wb") as f:
            f.write(grid.data.astype("<f4", copy=False).tobytes())
    except OSError as e:
        raise IoFailure(f"cannot write {path}: {e}") from e


def value_range(grid: Grid) -> tuple[float, float, float]:
    """(min, max, max - min) over all values, as Python floats."""
    lo = float(grid.data.min())
    hi = float(grid.data.max())
    return lo, hi, hi - lo
