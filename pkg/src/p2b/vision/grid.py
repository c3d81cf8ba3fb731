"""Facade structure from image gradients: floor/column grids, window boxes."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from ..errors import NoStructureError, ValidationError
from .image import ImageBuffer

# Peak acceptance: fraction of the profile maximum.
PEAK_PROMINENCE = 0.3
# Minimum separation between accepted peaks, fraction of the dimension.
PEAK_SEPARATION = 0.04
# Moving-average window, fraction of the dimension.
SMOOTH_FRACTION = 0.02
# Gradient floor below which the image counts as structureless.
FLAT_THRESHOLD = 4.0
# A dark component must cover this fraction of its tile to count as a window.
MIN_WINDOW_AREA = 0.02


@dataclass
class GridEstimate:
    floors: int
    columns: int
    row_bounds: list[int]
    col_bounds: list[int]

    def __post_init__(self):
        if self.floors < 1 or self.columns < 1:
            raise ValidationError("floors and columns must be >= 1")
        if len(self.row_bounds) != self.floors + 1:
            raise ValidationError("row_bounds must have floors+1 entries")
        if len(self.col_bounds) != self.columns + 1:
            raise ValidationError("col_bounds must have columns+1 entries")
        for bounds in (self.row_bounds, self.col_bounds):
            if any(nxt <= cur for cur, nxt in zip(bounds, bounds[1:])):
                raise ValidationError(f"bounds not strictly increasing: {bounds}")


@dataclass
class WindowBox:
    rel_left: float
    rel_top: float
    rel_width: float
    rel_height: float

    def __post_init__(self):
        for name in ("rel_left", "rel_top", "rel_width", "rel_height"):
            v = getattr(self, name)
            if not 0 < v < 1:
                raise ValidationError(f"{name}={v} outside (0,1)")
        if self.rel_left + self.rel_width > 1 or self.rel_top + self.rel_height > 1:
            raise ValidationError("window box exceeds its tile")


def _sobel(lum: np.ndarray):
    # gy responds to horizontal edges (floor lines), gx to vertical ones
    gx = ndimage.sobel(lum, axis=1, mode="nearest")
    gy = ndimage.sobel(lum, axis=0, mode="nearest")
    return gx, gy


def _smooth(profile: np.ndarray, frac: float) -> np.ndarray:
    width = max(int(round(len(profile) * frac)), 1)
    kernel = np.ones(width) / width
    return np.convolve(profile, kernel, mode="same")


def _interior_peaks(profile: np.ndarray, sep_frac: float, margin_frac: float) -> list[int]:
    """Local maxima >= 0.3*max, separated, away from the boundary margins."""
    n = len(profile)
    lo = profile.max() * PEAK_PROMINENCE
    margin = int(round(n * margin_frac))
    candidates = []
    for i in range(1, n - 1):
        if profile[i] >= lo and profile[i] >= profile[i - 1] and profile[i] > profile[i + 1]:
            if margin <= i < n - margin:
                candidates.append(i)
    # strongest first, greedy separation
    candidates.sort(key=lambda i: (-profile[i], i))
    min_sep = max(int(round(n * sep_frac)), 1)
    accepted: list[int] = []
    for i in candidates:
        if all(abs(i - j) >= min_sep for j in accepted):
            accepted.append(i)
    return sorted(accepted)


def estimate_grid(rect: ImageBuffer, separation: float = PEAK_SEPARATION) -> GridEstimate:
    """Count floors and window columns from gradient projection profiles."""
    if rect.w < 32 or rect.h < 32:
        raise ValidationError(f"rectified image too small: {rect.w}x{rect.h}")
    lum = rect.luminance()
    gx, gy = _sobel(lum)
    if max(np.abs(gx).max(), np.abs(gy).max()) < FLAT_THRESHOLD:
        raise NoStructureError("image has no measurable gradient structure")

    row_profile = _smooth(np.abs(gy).sum(axis=1), SMOOTH_FRACTION)
    col_profile = _smooth(np.abs(gx).sum(axis=0), SMOOTH_FRACTION)

    row_peaks = _interior_peaks(row_profile, separation, separation)
    col_peaks = _interior_peaks(col_profile, separation, separation)

    row_bounds = [0] + row_peaks + [rect.h]
    col_bounds = [0] + col_peaks + [rect.w]
    return GridEstimate(len(row_peaks) + 1, len(col_peaks) + 1, row_bounds, col_bounds)


def _otsu(lum: np.ndarray) -> float:
    """Threshold such that `lum < t` selects the dark class."""
    hist, edges = np.histogram(lum, bins=256, range=(0.0, 255.0))
    total = hist.sum()
    centers = (edges[:-1] + edges[1:]) / 2
    w0 = np.cumsum(hist)
    w1 = total - w0
    sum0 = np.cumsum(hist * centers)
    sum_all = sum0[-1]
    with np.errstate(divide="ignore", invalid="ignore"):
        mu0 = sum0 / w0
        mu1 = (sum_all - sum0) / w1
        between = w0 * w1 * (mu0 - mu1) ** 2
    between[~np.isfinite(between)] = -1
    # class 0 includes the argmax bin, so the cut sits at its upper edge
    return float(edges[int(np.argmax(between)) + 1])


def detect_window(tile: ImageBuffer) -> WindowBox | None:
    """Largest dark blob in the tile, if it covers enough area."""
    if tile.w < 8 or tile.h < 8:
        raise ValidationError(f"tile too small: {tile.w}x{tile.h}")
    lum = tile.luminance()
    if lum.max() - lum.min() < 1e-9:
        return None
    dark = lum < _otsu(lum)
    labels, n = ndimage.label(dark)  # 4-connected by default
    if n == 0:
        return None
    areas = ndimage.sum_labels(np.ones_like(labels), labels, index=np.arange(1, n + 1))
    best = int(np.argmax(areas)) + 1
    if areas[best - 1] < MIN_WINDOW_AREA * tile.w * tile.h:
        return None
    ys, xs = np.nonzero(labels == best)
    x0, x1 = int(xs.min()), int(xs.max())
    y0, y1 = int(ys.min()), int(ys.max())

    eps = 1e-3
    left = np.clip(x0 / tile.w, eps, 1 - 2 * eps)
    top = np.clip(y0 / tile.h, eps, 1 - 2 * eps)
    width = np.clip((x1 - x0 + 1) / tile.w, eps, 1 - left - eps)
    height = np.clip((y1 - y0 + 1) / tile.h, eps, 1 - top - eps)
    return WindowBox(float(left), float(top), float(width), float(height))
