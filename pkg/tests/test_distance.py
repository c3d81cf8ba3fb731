"""Distance transform and chamfer distance against brute-force oracles."""

import numpy as np
import pytest

from p2b.errors import EmptyMaskError, MaskDimensionError
from p2b.vision import (
    RasterMask,
    chamfer_against,
    distance_transform,
    silhouette_distance,
)


def brute_force_dt(bits: np.ndarray) -> np.ndarray:
    h, w = bits.shape
    ys, xs = np.nonzero(bits)
    out = np.empty((h, w))
    for y in range(h):
        for x in range(w):
            out[y, x] = np.sqrt(((ys - y) ** 2 + (xs - x) ** 2).min())
    return out


def test_all_set_is_zero():
    dt = distance_transform(RasterMask(np.ones((6, 9), dtype=bool)))
    assert (dt == 0).all()


def test_single_pixel_known_value():
    bits = np.zeros((8, 8), dtype=bool)
    bits[2, 2] = True  # (x=2, y=2)
    dt = distance_transform(RasterMask(bits))
    assert dt[6, 5] == pytest.approx(5.0)  # sqrt(3^2 + 4^2)
    assert dt[2, 2] == 0.0


def test_empty_mask_rejected():
    with pytest.raises(EmptyMaskError):
        distance_transform(RasterMask(np.zeros((4, 4), dtype=bool)))


def test_matches_brute_force_on_random_masks():
    rng = np.random.default_rng(7)
    for _ in range(40):
        h, w = rng.integers(2, 33, size=2)
        bits = rng.random((h, w)) < 0.2
        if not bits.any():
            bits[rng.integers(h), rng.integers(w)] = True
        dt = distance_transform(RasterMask(bits))
        assert np.allclose(dt, brute_force_dt(bits), atol=1e-9)


def brute_force_chamfer(a: np.ndarray, b: np.ndarray) -> float:
    ay, ax = np.nonzero(a)
    by, bx = np.nonzero(b)
    d_ab = np.mean([np.sqrt(((by - y) ** 2 + (bx - x) ** 2).min())
                    for y, x in zip(ay, ax)])
    d_ba = np.mean([np.sqrt(((ay - y) ** 2 + (ax - x) ** 2).min())
                    for y, x in zip(by, bx)])
    return 0.5 * (d_ab + d_ba)


def test_identity_is_zero():
    rng = np.random.default_rng(1)
    bits = rng.random((20, 20)) < 0.3
    bits[0, 0] = True
    m = RasterMask(bits)
    assert silhouette_distance(m, m) == 0.0


def test_singleton_pair_known_value():
    a = np.zeros((8, 8), dtype=bool)
    b = np.zeros((8, 8), dtype=bool)
    a[2, 2] = True
    b[6, 5] = True
    assert silhouette_distance(RasterMask(a), RasterMask(b)) == pytest.approx(5.0)


def test_symmetry_and_oracle():
    rng = np.random.default_rng(3)
    for _ in range(15):
        a = rng.random((16, 16)) < 0.15
        b = rng.random((16, 16)) < 0.15
        a[3, 3] = True
        b[10, 12] = True
        ma, mb = RasterMask(a), RasterMask(b)
        d1 = silhouette_distance(ma, mb)
        d2 = silhouette_distance(mb, ma)
        assert d1 == pytest.approx(d2)
        assert d1 == pytest.approx(brute_force_chamfer(a, b), abs=1e-9)


def test_zero_iff_identical():
    a = np.zeros((10, 10), dtype=bool)
    a[4, 4] = True
    b = a.copy()
    b[4, 5] = True
    assert silhouette_distance(RasterMask(a), RasterMask(b)) > 0


def test_dimension_mismatch_rejected():
    a = RasterMask(np.ones((5, 5), dtype=bool))
    b = RasterMask(np.ones((5, 6), dtype=bool))
    with pytest.raises(MaskDimensionError):
        silhouette_distance(a, b)


def test_empty_operand_rejected():
    a = RasterMask(np.ones((5, 5), dtype=bool))
    with pytest.raises(EmptyMaskError):
        silhouette_distance(a, RasterMask(np.zeros((5, 5), dtype=bool)))


def test_cached_reference_route_agrees():
    # the fitting loop's precomputed-DT path must equal the plain function
    rng = np.random.default_rng(11)
    for _ in range(10):
        a = rng.random((24, 24)) < 0.2
        b = rng.random((24, 24)) < 0.2
        a[1, 1] = True
        b[20, 20] = True
        ma, mb = RasterMask(a), RasterMask(b)
        dt_a = distance_transform(ma)
        assert chamfer_against(dt_a, ma.bits, mb) == pytest.approx(
            silhouette_distance(ma, mb))
