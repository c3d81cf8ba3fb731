"""Silhouette text format and rasterization."""

import numpy as np
import pytest

from p2b.errors import SilhouetteFormatError
from p2b.vision import (
    SilhouettePolyline,
    parse_silhouette,
    rasterize_silhouette,
    trace_boundary,
    write_silhouette,
)
from p2b.vision.raster import RasterMask


CANONICAL = "P2B-SILH 1 100 100\n10 10 90 10\n"


def test_parse_canonical():
    poly = parse_silhouette(CANONICAL)
    assert (poly.image_w, poly.image_h) == (100, 100)
    assert poly.segments == [(10.0, 10.0, 90.0, 10.0)]


def test_write_parse_byte_identical():
    assert write_silhouette(parse_silhouette(CANONICAL)) == CANONICAL


def test_roundtrip_fractional():
    text = "P2B-SILH 1 64 48\n1.5 2.25 60 40\n0 0 63.5 47\n"
    poly = parse_silhouette(text)
    assert write_silhouette(poly) == text
    again = parse_silhouette(write_silhouette(poly))
    assert again.segments == poly.segments


def test_comments_and_blank_lines_skipped():
    text = "P2B-SILH 1 100 100\n# a remark\n\n10 10 90 10\n"
    poly = parse_silhouette(text)
    assert len(poly.segments) == 1


def test_parse_structural_identity():
    poly = SilhouettePolyline(200, 100, [(0.0, 0.0, 199.0, 99.0), (5.5, 1.0, 6.5, 2.0)])
    again = parse_silhouette(write_silhouette(poly))
    assert again.image_w == poly.image_w and again.image_h == poly.image_h
    assert again.segments == poly.segments


@pytest.mark.parametrize("text,line", [
    ("", 1),
    ("P2B-SILH 2 100 100\n1 1 2 2\n", 1),
    ("NOPE 1 100 100\n1 1 2 2\n", 1),
    ("P2B-SILH 1 0 100\n1 1 2 2\n", 1),
    ("P2B-SILH 1 100 100\n1 1 2\n", 2),
    ("P2B-SILH 1 100 100\n1 1 2 x\n", 2),
    ("P2B-SILH 1 100 100\n150 1 2 2\n", 2),
    ("P2B-SILH 1 100 100\n1 1 2 2\n# ok\n3 101 4 4\n", 4),
])
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(SilhouetteFormatError) as exc:
        parse_silhouette(text)
    assert exc.value.line == line
    assert f"line {line}:" in str(exc.value)


def test_out_of_range_coordinate_message():
    with pytest.raises(SilhouetteFormatError):
        parse_silhouette("P2B-SILH 1 100 100\n10 10 150 10\n")


def test_no_segments_rejected():
    with pytest.raises(SilhouetteFormatError):
        parse_silhouette("P2B-SILH 1 100 100\n# only comments\n")


def test_rasterize_horizontal():
    poly = parse_silhouette("P2B-SILH 1 10 10\n0 5 9 5\n")
    m = rasterize_silhouette(poly, 10, 10)
    assert m.count() == 10
    assert m.bits[5].all()


def test_rasterize_diagonal():
    poly = parse_silhouette("P2B-SILH 1 10 10\n0 0 9 9\n")
    m = rasterize_silhouette(poly, 10, 10)
    assert m.count() == 10
    assert all(m.bits[i, i] for i in range(10))


def test_rasterize_scales_coordinates():
    # segment in 200x200 space lands at halved pixels on a 100x100 raster
    poly = parse_silhouette("P2B-SILH 1 200 200\n40 60 120 60\n")
    m = rasterize_silhouette(poly, 100, 100)
    ys, xs = np.nonzero(m.bits)
    assert set(ys) == {30}
    assert xs.min() == 20 and xs.max() == 60


def test_rasterize_clamps_after_scaling():
    poly = SilhouettePolyline(100, 100, [(0.0, 0.0, 100.0, 100.0)])
    m = rasterize_silhouette(poly, 50, 50)  # endpoint scales to 50, clamped to 49
    assert m.bits[49, 49]


def test_trace_boundary_of_rectangle():
    bits = np.zeros((40, 60), dtype=bool)
    bits[10:30, 15:45] = True
    poly = trace_boundary(RasterMask(bits))
    # tracing the filled block then re-rasterizing must reproduce its outline
    m = rasterize_silhouette(poly, 60, 40)
    ys, xs = np.nonzero(m.bits)
    assert ys.min() == 10 and ys.max() == 29
    assert xs.min() == 15 and xs.max() == 44
    # a rectangle outline merges into few segments
    assert len(poly.segments) <= 8
