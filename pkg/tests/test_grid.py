import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ebcomp import Dims, Grid, load_raw, store_raw, value_range
from ebcomp.errors import NonFiniteValue, SizeMismatch


def test_dims_basic():
    d = Dims((4, 5, 6))
    assert d.rank == 3
    assert d.count == 120
    assert d.extents == (4, 5, 6)


def test_dims_rejects_bad_extents():
    with pytest.raises(ValueError):
        Dims((4, 0, 6))
    with pytest.raises(ValueError):
        Dims(())
    with pytest.raises(ValueError):
        Dims((2, 2, 2, 2))


def test_grid_size_must_match_dims():
    with pytest.raises(SizeMismatch):
        Grid(Dims((3, 3)), np.zeros((3, 4), dtype=np.float32))


def test_grid_rejects_nonfinite():
    arr = np.zeros((4,), dtype=np.float32)
    arr[2] = np.nan
    with pytest.raises(NonFiniteValue):
        Grid(Dims((4,)), arr)
    arr[2] = np.inf
    with pytest.raises(NonFiniteValue):
        Grid(Dims((4,)), arr)


def test_grid_equality_is_bitwise(rng):
    a = rng.normal(size=(5, 6)).astype(np.float32)
    g1 = Grid(Dims((5, 6)), a)
    g2 = Grid(Dims((5, 6)), a.copy())
    assert g1 == g2
    b = a.copy()
    b[0, 0] = np.float32(b[0, 0]) + np.float32(1e-6)
    assert g1 != Grid(Dims((5, 6)), b)


def test_value_range():
    g = Grid(Dims((4,)), np.array([-1.5, 0.0, 2.5, 1.0], dtype=np.float32))
    assert value_range(g) == (-1.5, 2.5, 4.0)
    flat = Grid(Dims((3,)), np.full(3, 7.0, dtype=np.float32))
    assert value_range(flat) == (7.0, 7.0, 0.0)


def test_store_load_round_trip(tmp_path, rng):
    g = Grid(Dims((3, 4, 5)), rng.normal(size=(3, 4, 5)).astype(np.float32))
    path = tmp_path / "field.f32"
    store_raw(g, path)
    back = load_raw(path, Dims((3, 4, 5)))
    assert back == g


def test_load_rejects_wrong_size(tmp_path):
    path = tmp_path / "short.f32"
    path.write_bytes(b"\x00" * 10)
    with pytest.raises(SizeMismatch):
        load_raw(path, Dims((4,)))


@settings(deadline=None)
@given(
    st.lists(st.integers(min_value=1, max_value=6), min_size=1, max_size=3),
    st.integers(min_value=0, max_value=2**32 - 1),
)
def test_store_load_identity(tmp_path_factory, extents, seed):
    rng = np.random.default_rng(seed)
    shape = tuple(extents)
    g = Grid(Dims(shape), rng.normal(size=shape).astype(np.float32))
    path = tmp_path_factory.mktemp("raw") / "g.f32"
    store_raw(g, path)
    assert load_raw(path, Dims(shape)) == g
