"""Mask rasterization of meshes, distance transforms, chamfer distance."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from ..errors import DegenerateCameraError, EmptyMaskError, MaskDimensionError
from ..grammar.types import Mesh
from .camera import CameraParams, project_points


@dataclass
class RasterMask:
    bits: np.ndarray  # (h, w) bool

    def __post_init__(self):
        self.bits = np.ascontiguousarray(self.bits, dtype=bool)
        if self.bits.ndim != 2 or self.bits.shape[0] == 0 or self.bits.shape[1] == 0:
            raise MaskDimensionError(f"mask must be 2D non-empty, got {self.bits.shape}")

    @property
    def w(self) -> int:
        return int(self.bits.shape[1])

    @property
    def h(self) -> int:
        return int(self.bits.shape[0])

    def count(self) -> int:
        return int(self.bits.sum())


def _as_mesh_list(mesh) -> list[Mesh]:
    return list(mesh) if isinstance(mesh, (list, tuple)) else [mesh]


def _gather_triangles(meshes: list[Mesh]) -> np.ndarray:
    tris = []
    for m in meshes:
        if len(m.faces):
            tris.append(m.vertices[m.faces[:, :, 0]])
    if not tris:
        raise EmptyMaskError("no triangles to project")
    return np.concatenate(tris)  # (n, 3, 3)


def _mesh_centroid(meshes: list[Mesh]) -> np.ndarray:
    pools = {id(m.vertices): m.vertices for m in meshes}
    verts = np.vstack(list(pools.values()))
    return verts.mean(axis=0)


def _check_camera_outside(meshes: list[Mesh], cam: CameraParams):
    pools = {id(m.vertices): m.vertices for m in meshes}
    verts = np.vstack(list(pools.values()))
    center = verts.mean(axis=0)
    radius = float(np.linalg.norm(verts - center, axis=1).max())
    if np.linalg.norm(cam.eye() - center) <= radius:
        raise DegenerateCameraError(
            f"camera at distance {np.linalg.norm(cam.eye() - center):.2f} "
            f"inside bounding sphere of radius {radius:.2f}")


def _fill_triangles(pix: np.ndarray, tris_idx: np.ndarray, w: int, h: int) -> np.ndarray:
    """Scanline-fill projected triangles into a boolean coverage image.

    Pixel centers sit at (col+0.5, row+0.5); spans accumulate into a
    difference buffer so the whole image resolves with one cumsum.
    """
    diff = np.zeros((h, w + 1), dtype=np.int32)
    for tri in tris_idx:
        p = pix[tri]
        if np.any(np.isnan(p)):
            continue  # triangle behind the camera
        ymin = max(int(np.ceil(p[:, 1].min() - 0.5)), 0)
        ymax = min(int(np.floor(p[:, 1].max() - 0.5)), h - 1)
        if ymax < ymin:
            continue
        yc = np.arange(ymin, ymax + 1) + 0.5
        cross = np.full((3, len(yc)), np.nan)
        for i in range(3):
            x0, y0 = p[i]
            x1, y1 = p[(i + 1) % 3]
            if y0 == y1:
                continue
            # half-open span [min, max) so shared vertices count once
            hit = (yc >= min(y0, y1)) & (yc < max(y0, y1))
            t = (yc[hit] - y0) / (y1 - y0)
            cross[i, hit] = x0 + t * (x1 - x0)
        n_hit = np.sum(~np.isnan(cross), axis=0)
        with np.errstate(all="ignore"):
            xs0 = np.nanmin(cross, axis=0)
            xs1 = np.nanmax(cross, axis=0)
        xa = np.ceil(xs0 - 0.5).astype(np.int64, copy=False)
        xb = np.floor(xs1 - 0.5).astype(np.int64, copy=False)
        keep = (n_hit >= 2) & (xb >= xa) & (xb >= 0) & (xa <= w - 1)
        if not keep.any():
            continue
        rows = np.arange(ymin, ymax + 1)[keep]
        xa = np.clip(xa[keep], 0, w - 1)
        xb = np.clip(xb[keep], 0, w - 1)
        np.add.at(diff, (rows, xa), 1)
        np.add.at(diff, (rows, xb + 1), -1)
    return np.cumsum(diff, axis=1)[:, :w] > 0


def project_mass_coverage(mesh, cam: CameraParams, w: int, h: int) -> RasterMask:
    """Filled footprint of the projected mesh (union over triangles)."""
    meshes = _as_mesh_list(mesh)
    _check_camera_outside(meshes, cam)
    centroid = _mesh_centroid(meshes)

    pools: dict[int, np.ndarray] = {}
    tri_rows = []
    offset = 0
    offsets = {}
    for m in meshes:
        key = id(m.vertices)
        if key not in offsets:
            offsets[key] = offset
            pools[key] = m.vertices
            offset += len(m.vertices)
        tri_rows.append(m.faces[:, :, 0] + offsets[key])
    verts = np.vstack(list(pools.values()))
    tris_idx = np.concatenate([t for t in tri_rows if len(t)])

    pix, _ = project_points(verts, cam, centroid, w, h)
    return RasterMask(_fill_triangles(pix, tris_idx, w, h))


def boundary_of(mask: RasterMask) -> RasterMask:
    """Set pixels with at least one unset 4-neighbor (image border counts)."""
    b = mask.bits
    inner = np.zeros_like(b)
    inner[1:-1, 1:-1] = (b[1:-1, 1:-1] & b[:-2, 1:-1] & b[2:, 1:-1]
                         & b[1:-1, :-2] & b[1:-1, 2:])
    return RasterMask(b & ~inner)


def project_mass(mesh, cam: CameraParams, w: int, h: int) -> RasterMask:
    """Silhouette of the mesh under cam: boundary of the filled projection."""
    return boundary_of(project_mass_coverage(mesh, cam, w, h))


def distance_transform(mask: RasterMask) -> np.ndarray:
    """Exact Euclidean distance from every pixel to the nearest set pixel."""
    if not mask.bits.any():
        raise EmptyMaskError("distance transform of an empty mask")
    # edt measures distance to the nearest zero, so feed the complement
    return ndimage.distance_transform_edt(~mask.bits)


def silhouette_distance(a: RasterMask, b: RasterMask) -> float:
    """Symmetric chamfer distance in pixels."""
    if (a.w, a.h) != (b.w, b.h):
        raise MaskDimensionError(f"mask sizes differ: {a.w}x{a.h} vs {b.w}x{b.h}")
    if not a.bits.any() or not b.bits.any():
        raise EmptyMaskError("chamfer distance needs two non-empty masks")
    return chamfer_against(distance_transform(a), a.bits, b)


def chamfer_against(dt_ref: np.ndarray, ref_bits: np.ndarray, gen: RasterMask) -> float:
    """silhouette_distance with the reference transform precomputed.

    Fitting loops call this hundreds of times against one fixed mask.
    """
    if dt_ref.shape != gen.bits.shape:
        raise MaskDimensionError(f"mask sizes differ: {dt_ref.shape} vs {gen.bits.shape}")
    if not gen.bits.any():
        raise EmptyMaskError("chamfer distance needs two non-empty masks")
    dt_gen = distance_transform(gen)
    d_rg = float(dt_gen[ref_bits].mean())
    d_gr = float(dt_ref[gen.bits].mean())
    return 0.5 * (d_rg + d_gr)


def chamfer_cached(dt_a: np.ndarray, a_bits: np.ndarray,
                   dt_b: np.ndarray, b_bits: np.ndarray) -> float:
    """Symmetric chamfer when both transforms are already on hand."""
    if dt_a.shape != dt_b.shape:
        raise MaskDimensionError(f"mask sizes differ: {dt_a.shape} vs {dt_b.shape}")
    if not a_bits.any() or not b_bits.any():
        raise EmptyMaskError("chamfer distance needs two non-empty masks")
    return 0.5 * (float(dt_b[a_bits].mean()) + float(dt_a[b_bits].mean()))
