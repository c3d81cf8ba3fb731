"""Flat-color z-buffer rendering of building models.

Produces the synthetic photographs that exercise the fitting pipeline;
not a general renderer. Each face is painted its material's diffuse color
with occlusion resolved per pixel.
"""

from __future__ import annotations

import numpy as np

from ..grammar.types import BuildingModel
from .camera import CameraParams, project_points
from .image import ImageBuffer
from .raster import _mesh_centroid

BACKGROUND = (202, 212, 222)


def render_model(model: BuildingModel, cam: CameraParams, w: int, h: int,
                 look_at=None) -> ImageBuffer:
    meshes = model.meshes
    centroid = _mesh_centroid(meshes) if look_at is None else np.asarray(look_at, float)

    out = np.empty((h, w, 3), dtype=np.uint8)
    out[:, :] = BACKGROUND
    zbuf = np.full((h, w), np.inf)

    for mesh in meshes:
        color = np.array(model.materials[mesh.material].diffuse_rgb, dtype=np.uint8)
        pix, depth = project_points(mesh.vertices, cam, centroid, w, h)
        for face in mesh.faces:
            vi = face[:, 0]
            p = pix[vi]
            if np.any(np.isnan(p)):
                continue
            z = depth[vi]
            _paint_triangle(out, zbuf, p, z, color)
    return ImageBuffer(out)


def _paint_triangle(out, zbuf, p, z, color):
    h, w = zbuf.shape
    xmin = max(int(np.floor(p[:, 0].min() - 0.5)), 0)
    xmax = min(int(np.ceil(p[:, 0].max() - 0.5)), w - 1)
    ymin = max(int(np.floor(p[:, 1].min() - 0.5)), 0)
    ymax = min(int(np.ceil(p[:, 1].max() - 0.5)), h - 1)
    if xmax < xmin or ymax < ymin:
        return
    ax, ay = p[0]
    bx, by = p[1]
    cx, cy = p[2]
    area = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    if abs(area) < 1e-12:
        return
    xs = np.arange(xmin, xmax + 1) + 0.5
    ys = np.arange(ymin, ymax + 1) + 0.5
    gx, gy = np.meshgrid(xs, ys)
    # barycentric weights; sign of area handles either winding
    w0 = ((bx - gx) * (cy - gy) - (by - gy) * (cx - gx)) / area
    w1 = ((cx - gx) * (ay - gy) - (cy - gy) * (ax - gx)) / area
    w2 = 1.0 - w0 - w1
    inside = (w0 >= 0) & (w1 >= 0) & (w2 >= 0)
    if not inside.any():
        return
    # 1/z interpolates linearly in screen space
    inv_z = w0 / z[0] + w1 / z[1] + w2 / z[2]
    with np.errstate(divide="ignore"):
        depth = 1.0 / inv_z
    tile_z = zbuf[ymin:ymax + 1, xmin:xmax + 1]
    win = inside & (depth < tile_z)
    tile_z[win] = depth[win]
    out[ymin:ymax + 1, xmin:xmax + 1][win] = color
