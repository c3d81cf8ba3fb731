"""Lab conversion, k-means clustering, facade color extraction."""

import numpy as np
import pytest

from p2b.errors import EmptyMaskError, ValidationError
from p2b.vision import (
    ImageBuffer,
    LabColor,
    facade_color,
    kmeans,
    lab_to_rgb,
    rgb_to_lab,
)


def test_white_point():
    lab = rgb_to_lab((255, 255, 255))
    assert lab.L == pytest.approx(100.0, abs=1e-3)
    assert lab.a == pytest.approx(0.0, abs=1e-3)
    assert lab.b == pytest.approx(0.0, abs=1e-3)


def test_black():
    lab = rgb_to_lab((0, 0, 0))
    assert (lab.L, lab.a, lab.b) == (0.0, 0.0, 0.0)


def test_red_reference_values():
    # standard sRGB/D65 CIELAB coordinates for pure red
    lab = rgb_to_lab((255, 0, 0))
    assert lab.L == pytest.approx(53.24, abs=0.05)
    assert lab.a == pytest.approx(80.09, abs=0.05)
    assert lab.b == pytest.approx(67.20, abs=0.05)


def test_roundtrip_within_one_level():
    rng = np.random.default_rng(5)
    for _ in range(300):
        rgb = tuple(int(v) for v in rng.integers(0, 256, size=3))
        back = lab_to_rgb(rgb_to_lab(rgb))
        assert max(abs(b - o) for b, o in zip(back, rgb)) <= 1


def test_lab_L_range_enforced():
    with pytest.raises(ValidationError):
        LabColor(150.0, 0.0, 0.0)


def test_kmeans_all_identical():
    clusters = kmeans([LabColor(10.0, 1.0, 1.0)] * 50, k=4)
    assert len(clusters) == 1
    assert clusters[0].count == 50
    assert clusters[0].centroid.L == pytest.approx(10.0)


def test_kmeans_two_separable_clusters():
    pts = [LabColor(40, 5, 5)] * 70 + [LabColor(80, -5, -5)] * 30
    clusters = kmeans(pts, k=2)
    assert [c.count for c in clusters] == [70, 30]
    big, small = clusters
    assert (big.centroid.L, big.centroid.a, big.centroid.b) == (40, 5, 5)
    assert (small.centroid.L, small.centroid.a, small.centroid.b) == (80, -5, -5)


def test_kmeans_fewer_distinct_than_k():
    pts = [LabColor(10, 0, 0)] * 3 + [LabColor(90, 0, 0)] * 2
    clusters = kmeans(pts, k=10)
    assert len(clusters) == 2
    assert sorted(c.count for c in clusters) == [2, 3]


def test_kmeans_deterministic():
    rng = np.random.default_rng(9)
    pts = [LabColor(float(l), float(a), float(b))
           for l, a, b in zip(rng.uniform(0, 100, 200),
                              rng.uniform(-40, 40, 200),
                              rng.uniform(-40, 40, 200))]
    c1 = kmeans(pts, 5, seed=42)
    c2 = kmeans(pts, 5, seed=42)
    assert [(c.centroid, c.count) for c in c1] == [(c.centroid, c.count) for c in c2]


def test_kmeans_objective_non_increasing():
    rng = np.random.default_rng(13)
    pts = [LabColor(float(l), float(a), float(b))
           for l, a, b in zip(rng.uniform(0, 100, 300),
                              rng.uniform(-30, 30, 300),
                              rng.uniform(-30, 30, 300))]
    _, objectives = kmeans(pts, 6, with_trace=True)
    assert all(b <= a + 1e-9 for a, b in zip(objectives, objectives[1:]))


def test_kmeans_empty_rejected():
    with pytest.raises(ValidationError):
        kmeans([], 3)


def test_facade_color_uniform_wall():
    img = ImageBuffer(np.full((64, 64, 3), (143, 140, 131), dtype=np.uint8))
    rgb = facade_color(img)
    assert max(abs(a - b) for a, b in zip(rgb, (143, 140, 131))) <= 1


def test_facade_color_masked_windows():
    img = np.full((100, 100, 3), (181, 168, 143), dtype=np.uint8)
    img[20:50, 10:90] = (35, 38, 48)  # a wide dark band, ~24% of pixels
    rgb = facade_color(ImageBuffer(img), [(10, 20, 90, 50)])
    assert max(abs(a - b) for a, b in zip(rgb, (181, 168, 143))) <= 2


def test_masking_pulls_result_toward_wall():
    # windows dominate pixel count; only masking recovers the wall color
    img = np.full((100, 100, 3), (181, 168, 143), dtype=np.uint8)
    img[10:90, 10:90] = (35, 38, 48)
    wall = np.array((181, 168, 143), dtype=float)
    masked = np.array(facade_color(ImageBuffer(img), [(10, 10, 90, 90)]), dtype=float)
    unmasked = np.array(facade_color(ImageBuffer(img)), dtype=float)
    assert np.linalg.norm(masked - wall) < np.linalg.norm(unmasked - wall)
    assert np.abs(masked - wall).max() <= 2


def test_facade_color_all_masked_rejected():
    img = ImageBuffer(np.zeros((10, 10, 3), dtype=np.uint8))
    with pytest.raises(EmptyMaskError):
        facade_color(img, [(0, 0, 10, 10)])
