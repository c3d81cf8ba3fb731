"""Perspective rectification of facade quads."""

from __future__ import annotations

import numpy as np

from ..errors import DegenerateHomographyError
from .image import ImageBuffer


def solve_homography(src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    """3x3 homography H with H·src_i ~ dst_i for the four correspondences.

    Direct linear solve: 8 equations, 8 unknowns, h33 pinned to 1.
    """
    src = np.asarray(src, dtype=float)
    dst = np.asarray(dst, dtype=float)
    a = np.zeros((8, 8))
    rhs = np.zeros(8)
    for i in range(4):
        x, y = src[i]
        u, v = dst[i]
        a[2 * i] = [x, y, 1, 0, 0, 0, -u * x, -u * y]
        a[2 * i + 1] = [0, 0, 0, x, y, 1, -v * x, -v * y]
        rhs[2 * i] = u
        rhs[2 * i + 1] = v
    try:
        sol = np.linalg.solve(a, rhs)
    except np.linalg.LinAlgError as exc:
        raise DegenerateHomographyError(f"quad is degenerate: {exc}") from exc
    if not np.all(np.isfinite(sol)):
        raise DegenerateHomographyError("quad is degenerate: non-finite solution")
    return np.array([[sol[0], sol[1], sol[2]],
                     [sol[3], sol[4], sol[5]],
                     [sol[6], sol[7], 1.0]])


def apply_homography(hmat: np.ndarray, pts: np.ndarray) -> np.ndarray:
    pts = np.asarray(pts, dtype=float)
    ones = np.ones((len(pts), 1))
    q = np.hstack([pts, ones]) @ hmat.T
    return q[:, :2] / q[:, 2:3]


def _bilinear(img: np.ndarray, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    h, w = img.shape[:2]
    xs = np.clip(xs, 0.0, w - 1.0)
    ys = np.clip(ys, 0.0, h - 1.0)
    x0 = np.floor(xs).astype(int)
    y0 = np.floor(ys).astype(int)
    x1 = np.minimum(x0 + 1, w - 1)
    y1 = np.minimum(y0 + 1, h - 1)
    fx = (xs - x0)[..., None]
    fy = (ys - y0)[..., None]
    p = img.astype(np.float64)
    top = p[y0, x0] * (1 - fx) + p[y0, x1] * fx
    bot = p[y1, x0] * (1 - fx) + p[y1, x1] * fx
    return top * (1 - fy) + bot * fy


def rectify_facade(img: ImageBuffer, quad) -> ImageBuffer:
    """Warp a facade quad to an axis-aligned rectangle.

    quad: four (x, y) pixel points counter-clockwise as displayed, starting
    top-left: (top-left, bottom-left, bottom-right, top-right). Output size
    is the rounded average of opposite edge lengths.
    """
    quad = np.asarray(quad, dtype=float)
    if quad.shape != (4, 2):
        raise DegenerateHomographyError(f"quad must be 4 points, got {quad.shape}")
    tl, bl, br, tr = quad
    # corners are pixel centers, so a span of n norm-units covers n+1 pixels
    out_w = int(round((np.linalg.norm(tr - tl) + np.linalg.norm(br - bl)) / 2)) + 1
    out_h = int(round((np.linalg.norm(bl - tl) + np.linalg.norm(br - tr)) / 2)) + 1
    if out_w < 2 or out_h < 2:
        raise DegenerateHomographyError(f"quad collapses to {out_w}x{out_h}")

    dst = np.array([[0, 0], [0, out_h - 1], [out_w - 1, out_h - 1], [out_w - 1, 0]],
                   dtype=float)
    # warp by sampling: map output pixels back into the source image
    hmat = solve_homography(dst, quad)
    gy, gx = np.mgrid[0:out_h, 0:out_w]
    pts = np.stack([gx.ravel(), gy.ravel()], axis=1)
    src_pts = apply_homography(hmat, pts)
    sample = _bilinear(img.rgb, src_pts[:, 0].reshape(out_h, out_w),
                       src_pts[:, 1].reshape(out_h, out_w))
    return ImageBuffer(np.clip(np.rint(sample), 0, 255).astype(np.uint8))
