"""CIELAB conversion and seeded k-means for dominant facade color."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import EmptyMaskError, ValidationError
from .image import ImageBuffer

DEFAULT_K = 10
DEFAULT_SEED = 42
MAX_ITERATIONS = 100

# sRGB / D65
_RGB_TO_XYZ = np.array([[0.4124564, 0.3575761, 0.1804375],
                        [0.2126729, 0.7151522, 0.0721750],
                        [0.0193339, 0.1191920, 0.9503041]])
_XYZ_TO_RGB = np.linalg.inv(_RGB_TO_XYZ)
_WHITE = np.array([0.95047, 1.0, 1.08883])
_DELTA = 6.0 / 29.0


@dataclass(frozen=True)
class LabColor:
    L: float
    a: float
    b: float

    def __post_init__(self):
        if not -1e-6 <= self.L <= 100 + 1e-6:
            raise ValidationError(f"L={self.L} outside [0, 100]")


@dataclass(frozen=True)
class Cluster:
    centroid: LabColor
    count: int


def _srgb_to_linear(c: np.ndarray) -> np.ndarray:
    return np.where(c <= 0.04045, c / 12.92, ((c + 0.055) / 1.055) ** 2.4)


def _linear_to_srgb(c: np.ndarray) -> np.ndarray:
    c = np.clip(c, 0.0, 1.0)
    return np.where(c <= 0.0031308, 12.92 * c, 1.055 * c ** (1 / 2.4) - 0.055)


def _f(t: np.ndarray) -> np.ndarray:
    return np.where(t > _DELTA ** 3, np.cbrt(t), t / (3 * _DELTA ** 2) + 4.0 / 29.0)


def _f_inv(t: np.ndarray) -> np.ndarray:
    return np.where(t > _DELTA, t ** 3, 3 * _DELTA ** 2 * (t - 4.0 / 29.0))


def rgb_array_to_lab(rgb: np.ndarray) -> np.ndarray:
    """(n,3) bytes -> (n,3) Lab."""
    lin = _srgb_to_linear(np.asarray(rgb, dtype=np.float64) / 255.0)
    xyz = lin @ _RGB_TO_XYZ.T / _WHITE
    fx, fy, fz = _f(xyz[:, 0]), _f(xyz[:, 1]), _f(xyz[:, 2])
    return np.stack([116 * fy - 16, 500 * (fx - fy), 200 * (fy - fz)], axis=1)


def lab_array_to_rgb(lab: np.ndarray) -> np.ndarray:
    lab = np.asarray(lab, dtype=np.float64)
    fy = (lab[:, 0] + 16) / 116
    fx = fy + lab[:, 1] / 500
    fz = fy - lab[:, 2] / 200
    xyz = np.stack([_f_inv(fx), _f_inv(fy), _f_inv(fz)], axis=1) * _WHITE
    srgb = _linear_to_srgb(xyz @ _XYZ_TO_RGB.T)
    return np.clip(np.rint(srgb * 255), 0, 255).astype(np.uint8)


def rgb_to_lab(rgb) -> LabColor:
    L, a, b = rgb_array_to_lab(np.asarray(rgb, dtype=np.float64).reshape(1, 3))[0]
    return LabColor(float(np.clip(L, 0.0, 100.0)), float(a), float(b))


def lab_to_rgb(lab: LabColor) -> tuple[int, int, int]:
    arr = lab_array_to_rgb(np.array([[lab.L, lab.a, lab.b]]))[0]
    return int(arr[0]), int(arr[1]), int(arr[2])


def _farthest_point_seeds(pts: np.ndarray, k: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    first = int(rng.integers(len(pts)))
    centers = [first]
    d2 = np.sum((pts - pts[first]) ** 2, axis=1)
    for _ in range(k - 1):
        nxt = int(np.argmax(d2))  # ties resolve to the lowest index
        centers.append(nxt)
        d2 = np.minimum(d2, np.sum((pts - pts[nxt]) ** 2, axis=1))
    return pts[centers].copy()


def kmeans(points, k: int, seed: int = DEFAULT_SEED, with_trace: bool = False):
    """Lloyd's algorithm on Lab points with farthest-point seeding.

    Deterministic for a fixed (points, k, seed). Returns clusters sorted by
    descending member count. Fewer distinct points than k collapses to one
    cluster per distinct point.
    """
    if k < 1:
        raise ValidationError(f"k must be >= 1, got {k}")
    if isinstance(points, np.ndarray):
        arr = np.asarray(points, dtype=np.float64)
    else:
        arr = np.array([[p.L, p.a, p.b] for p in points], dtype=np.float64)
    if arr.size == 0:
        raise ValidationError("kmeans needs at least one point")

    # collapse duplicates; Lloyd on weighted uniques is the same fixed point
    uniq, inverse, counts = np.unique(arr, axis=0, return_inverse=True,
                                      return_counts=True)
    k_eff = min(k, len(uniq))
    centers = _farthest_point_seeds(uniq, k_eff, seed)

    labels = np.full(len(uniq), -1)
    objectives = []
    for _ in range(MAX_ITERATIONS):
        d2 = np.sum((uniq[:, None, :] - centers[None, :, :]) ** 2, axis=2)
        new_labels = np.argmin(d2, axis=1)
        objectives.append(float((d2[np.arange(len(uniq)), new_labels] * counts).sum()))
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels
        for j in range(k_eff):
            sel = labels == j
            if sel.any():
                w = counts[sel].astype(float)
                centers[j] = (uniq[sel] * w[:, None]).sum(axis=0) / w.sum()

    cluster_counts = np.bincount(labels, weights=counts, minlength=k_eff).astype(int)
    order = sorted(range(k_eff), key=lambda j: (-cluster_counts[j], j))
    clusters = [
        Cluster(LabColor(float(np.clip(centers[j][0], 0, 100)),
                         float(centers[j][1]), float(centers[j][2])),
                int(cluster_counts[j]))
        for j in order if cluster_counts[j] > 0
    ]
    if with_trace:
        return clusters, objectives
    return clusters


def facade_color(rect: ImageBuffer, windows=(), k: int = DEFAULT_K,
                 seed: int = DEFAULT_SEED) -> tuple[int, int, int]:
    """Dominant wall color: largest of k Lab clusters over non-window pixels.

    windows: absolute pixel boxes (x0, y0, x1, y1), half-open, to exclude.
    """
    keep = np.ones((rect.h, rect.w), dtype=bool)
    for x0, y0, x1, y1 in windows:
        xa, ya = max(int(x0), 0), max(int(y0), 0)
        xb, yb = min(int(x1), rect.w), min(int(y1), rect.h)
        if xb > xa and yb > ya:
            keep[ya:yb, xa:xb] = False
    pixels = rect.rgb[keep]
    if len(pixels) == 0:
        raise EmptyMaskError("all pixels fall inside window boxes")
    lab = rgb_array_to_lab(pixels.reshape(-1, 3))
    clusters = kmeans(lab, k, seed)
    c = clusters[0].centroid
    return lab_to_rgb(c)
