"""Silhouette polylines: the text format, rasterization, boundary tracing.

Format, line by line:
    P2B-SILH 1 <width> <height>
    x1 y1 x2 y2
    ...
Numbers are decimals separated by single spaces; '#' starts a comment line.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import SilhouetteFormatError

MAGIC = "P2B-SILH"
VERSION = 1


@dataclass
class SilhouettePolyline:
    image_w: int
    image_h: int
    segments: list[tuple[float, float, float, float]]

    def __post_init__(self):
        if self.image_w <= 0 or self.image_h <= 0:
            raise SilhouetteFormatError(
                f"image dimensions must be positive, got {self.image_w}x{self.image_h}")
        if not self.segments:
            raise SilhouetteFormatError("at least one segment required")
        for x1, y1, x2, y2 in self.segments:
            for x in (x1, x2):
                if not 0 <= x <= self.image_w:
                    raise SilhouetteFormatError(f"x coordinate {x} outside [0, {self.image_w}]")
            for y in (y1, y2):
                if not 0 <= y <= self.image_h:
                    raise SilhouetteFormatError(f"y coordinate {y} outside [0, {self.image_h}]")


def _num(tok: str, lineno: int) -> float:
    try:
        v = float(tok)
    except ValueError:
        raise SilhouetteFormatError(f"bad number {tok!r}", line=lineno) from None
    if not np.isfinite(v):
        raise SilhouetteFormatError(f"non-finite number {tok!r}", line=lineno)
    return v


def parse_silhouette(text: str) -> SilhouettePolyline:
    lines = text.split("\n")
    if not lines or not lines[0].strip():
        raise SilhouetteFormatError("missing header", line=1)
    head = lines[0].split(" ")
    if len(head) != 4 or head[0] != MAGIC:
        raise SilhouetteFormatError(f"header must be '{MAGIC} 1 <width> <height>'", line=1)
    if head[1] != str(VERSION):
        raise SilhouetteFormatError(f"unsupported version {head[1]!r}", line=1)
    try:
        w, h = int(head[2]), int(head[3])
    except ValueError:
        raise SilhouetteFormatError("width/height must be integers", line=1) from None
    if w <= 0 or h <= 0:
        raise SilhouetteFormatError(f"dimensions must be positive, got {w}x{h}", line=1)

    segments = []
    for lineno, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        toks = line.split()
        if len(toks) != 4:
            raise SilhouetteFormatError(
                f"expected 'x1 y1 x2 y2', got {len(toks)} fields", line=lineno)
        x1, y1, x2, y2 = (_num(t, lineno) for t in toks)
        if not (0 <= x1 <= w and 0 <= x2 <= w):
            raise SilhouetteFormatError(f"x coordinate outside [0, {w}]", line=lineno)
        if not (0 <= y1 <= h and 0 <= y2 <= h):
            raise SilhouetteFormatError(f"y coordinate outside [0, {h}]", line=lineno)
        segments.append((x1, y1, x2, y2))
    if not segments:
        raise SilhouetteFormatError("no segments", line=len(lines))
    return SilhouettePolyline(w, h, segments)


def _fmt_coord(v: float) -> str:
    if v == int(v):
        return str(int(v))
    return repr(float(v))


def write_silhouette(poly: SilhouettePolyline) -> str:
    out = [f"{MAGIC} {VERSION} {poly.image_w} {poly.image_h}"]
    for seg in poly.segments:
        out.append(" ".join(_fmt_coord(c) for c in seg))
    return "\n".join(out) + "\n"


def _bresenham(x0: int, y0: int, x1: int, y1: int):
    """8-connected line pixels, both endpoints included."""
    dx, dy = abs(x1 - x0), -abs(y1 - y0)
    sx = 1 if x0 < x1 else -1
    sy = 1 if y0 < y1 else -1
    err = dx + dy
    while True:
        yield x0, y0
        if x0 == x1 and y0 == y1:
            return
        e2 = 2 * err
        if e2 >= dy:
            err += dy
            x0 += sx
        if e2 <= dx:
            err += dx
            y0 += sy


def rasterize_silhouette(poly: SilhouettePolyline, w: int, h: int):
    """Draw every segment, scaled from the polyline's image space to w x h."""
    from .raster import RasterMask

    if w <= 0 or h <= 0:
        raise ValueError("raster dimensions must be positive")
    bits = np.zeros((h, w), dtype=bool)
    sx, sy = w / poly.image_w, h / poly.image_h
    for x1, y1, x2, y2 in poly.segments:
        p0 = (int(round(x1 * sx)), int(round(y1 * sy)))
        p1 = (int(round(x2 * sx)), int(round(y2 * sy)))
        p0 = (min(max(p0[0], 0), w - 1), min(max(p0[1], 0), h - 1))
        p1 = (min(max(p1[0], 0), w - 1), min(max(p1[1], 0), h - 1))
        for px, py in _bresenham(*p0, *p1):
            bits[py, px] = True
    return RasterMask(bits)


# Moore neighborhood in clockwise order starting east, image coords (y down).
_MOORE = [(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)]


def trace_boundary(mask, image_w: int | None = None, image_h: int | None = None) -> SilhouettePolyline:
    """Outer boundary of a filled mask as a closed polyline.

    Moore tracing from the topmost-leftmost set pixel; collinear runs merge
    into single segments. Coordinates land in the mask's own pixel space
    unless image_w/image_h request scaling.
    """
    bits = mask.bits
    h, w = bits.shape
    ys, xs = np.nonzero(bits)
    if len(xs) == 0:
        raise ValueError("cannot trace an empty mask")
    # row-major nonzero order: topmost row first, leftmost within it
    start = (int(xs[0]), int(ys[0]))

    def is_set(x, y):
        return 0 <= x < w and 0 <= y < h and bits[y, x]

    contour: list[tuple[int, int]] = []
    cur = start
    back = 4  # west of the start pixel is unset by choice of start
    for _ in range(4 * len(xs) + 8):
        contour.append(cur)
        # clockwise scan beginning at the known-unset backtrack neighbor;
        # the neighbor examined just before the hit becomes the new backtrack
        prev_unset = (cur[0] + _MOORE[back][0], cur[1] + _MOORE[back][1])
        moved = False
        for k in range(8):
            d = (back + k) % 8
            nx, ny = cur[0] + _MOORE[d][0], cur[1] + _MOORE[d][1]
            if is_set(nx, ny):
                back = _MOORE.index((prev_unset[0] - nx, prev_unset[1] - ny))
                cur = (nx, ny)
                moved = True
                break
            prev_unset = (nx, ny)
        if not moved:
            break  # isolated pixel
        if cur == start:
            break

    if len(contour) == 1:
        contour.append((start[0] + 1, start[1]) if is_set(start[0] + 1, start[1]) else start)

    # merge collinear runs
    pts = [contour[0]]
    for p in contour[1:]:
        if len(pts) >= 2:
            ax, ay = pts[-2]
            bx, by = pts[-1]
            if (bx - ax) * (p[1] - by) == (by - ay) * (p[0] - bx):
                pts[-1] = p
                continue
        pts.append(p)
    pts.append(contour[0])  # close the loop

    sx = 1.0 if image_w is None else image_w / w
    sy = 1.0 if image_h is None else image_h / h
    segments = []
    for (x1, y1), (x2, y2) in zip(pts[:-1], pts[1:]):
        if (x1, y1) != (x2, y2):
            segments.append((x1 * sx, y1 * sy, x2 * sx, y2 * sy))
    return SilhouettePolyline(image_w or w, image_h or h, segments)
