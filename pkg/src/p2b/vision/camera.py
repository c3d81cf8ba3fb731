"""Orbit camera: six parameters, pinhole projection."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import ValidationError

AZIMUTH_RANGE = (-180.0, 180.0)
ELEVATION_RANGE = (0.0, 80.0)
FOV_RANGE = (20.0, 90.0)


@dataclass(frozen=True)
class CameraParams:
    """Camera orbiting the world origin, aimed at the mass centroid.

    azimuth 0 puts the camera on +z; elevation lifts it toward +y.
    offset_x/offset_y shift the principal point in pixels.
    """

    azimuth_deg: float
    elevation_deg: float
    distance_m: float
    fov_deg: float
    offset_x_px: float = 0.0
    offset_y_px: float = 0.0

    def __post_init__(self):
        if not AZIMUTH_RANGE[0] <= self.azimuth_deg <= AZIMUTH_RANGE[1]:
            raise ValidationError(f"azimuth {self.azimuth_deg} outside {AZIMUTH_RANGE}")
        if not ELEVATION_RANGE[0] <= self.elevation_deg <= ELEVATION_RANGE[1]:
            raise ValidationError(f"elevation {self.elevation_deg} outside {ELEVATION_RANGE}")
        if self.distance_m <= 0:
            raise ValidationError(f"distance must be positive, got {self.distance_m}")
        if not FOV_RANGE[0] <= self.fov_deg <= FOV_RANGE[1]:
            raise ValidationError(f"fov {self.fov_deg} outside {FOV_RANGE}")

    def eye(self) -> np.ndarray:
        az = math.radians(self.azimuth_deg)
        el = math.radians(self.elevation_deg)
        return self.distance_m * np.array(
            [math.sin(az) * math.cos(el), math.sin(el), math.cos(az) * math.cos(el)])


def camera_frame(cam: CameraParams, look_at: np.ndarray):
    """Returns (eye, right, up, forward), forward unit-length toward look_at."""
    eye = cam.eye()
    fwd = np.asarray(look_at, dtype=float) - eye
    n = np.linalg.norm(fwd)
    if n < 1e-12:
        raise ValidationError("camera coincides with its look-at point")
    fwd = fwd / n
    world_up = np.array([0.0, 1.0, 0.0])
    right = np.cross(fwd, world_up)
    rn = np.linalg.norm(right)
    if rn < 1e-9:
        # looking straight up/down; elevation bound keeps us out of here,
        # but guard anyway
        world_up = np.array([0.0, 0.0, 1.0])
        right = np.cross(fwd, world_up)
        rn = np.linalg.norm(right)
    right /= rn
    up = np.cross(right, fwd)
    return eye, right, up, fwd


def focal_px(cam: CameraParams, w: int) -> float:
    return (w / 2.0) / math.tan(math.radians(cam.fov_deg) / 2.0)


def project_points(points: np.ndarray, cam: CameraParams, look_at: np.ndarray,
                   w: int, h: int):
    """Pinhole-project (n,3) world points; returns ((n,2) pixels, (n,) depths).

    Depth is distance along the viewing axis; points at depth <= 0 are
    behind the camera and get NaN pixels.
    """
    eye, right, up, fwd = camera_frame(cam, look_at)
    rel = np.asarray(points, dtype=float) - eye
    x = rel @ right
    y = rel @ up
    depth = rel @ fwd
    f = focal_px(cam, w)
    with np.errstate(divide="ignore", invalid="ignore"):
        px = w / 2.0 + f * x / depth + cam.offset_x_px
        py = h / 2.0 - f * y / depth + cam.offset_y_px
    bad = depth <= 1e-9
    px[bad] = np.nan
    py[bad] = np.nan
    return np.stack([px, py], axis=1), depth
