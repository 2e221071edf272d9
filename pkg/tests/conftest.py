"""Shared field generators for the test suite."""

import numpy as np
import pytest

from ebcomp import Dims, Grid


def smooth_field(rng, shape):
    """Sum of a few low-frequency sinusoids along each axis."""
    axes = np.indices(shape).astype(np.float64)
    out = np.zeros(shape, dtype=np.float64)
    for ax, coord in enumerate(axes):
        waves = rng.integers(1, 4)
        for _ in range(waves):
            freq = rng.uniform(0.5, 3.0) / max(shape[ax], 2)
            phase = rng.uniform(0, 2 * np.pi)
            out += rng.uniform(0.3, 1.0) * np.sin(2 * np.pi * freq * coord + phase)
    return out.astype(np.float32)


def noisy_field(rng, shape):
    base = smooth_field(rng, shape).astype(np.float64)
    return (base + rng.normal(0, 0.2, shape)).astype(np.float32)


def constant_field(rng, shape):
    return np.full(shape, np.float32(rng.uniform(-5, 5)), dtype=np.float32)


def affine_field(rng, shape):
    axes = np.indices(shape).astype(np.float64)
    out = np.full(shape, rng.uniform(-1, 1))
    for coord in axes:
        out = out + rng.uniform(-0.5, 0.5) * coord
    return out.astype(np.float32)


FIELD_KINDS = (smooth_field, noisy_field, constant_field, affine_field)


def make_grid(rng, shape, kind=smooth_field) -> Grid:
    return Grid(Dims(tuple(shape)), kind(rng, tuple(shape)).ravel().copy())


def random_shape(rng, rank, lo=5, hi=70):
    return tuple(int(rng.integers(lo, hi + 1)) for _ in range(rank))


@pytest.fixture
def rng():
    return np.random.default_rng(0x5EED)
