"""Facade and window style registries, and full-building composition.

compose_building() lays a floors x columns tile grid on every
window-bearing facade of the mass, puts one window mesh in each tile,
and emits frame trim per facade plus wall/roof materials.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import GeometryError, UnknownStyleError
from .mass import denormalize, instantiate_mass_physical, mass_style
from .types import BuildingGrammar, BuildingModel, FacadeQuad, Material, Mesh

PANE_DEPTH_M = 0.08  # glass sits this far behind the facade plane

GLASS_RGB = (40, 44, 56)
FRAME_RGB = (228, 228, 224)
ROOF_RGB = (70, 64, 60)


@dataclass(frozen=True)
class FacadeStyle:
    """Library facade style: defaults plus the matching signature."""

    id: int
    name: str
    floor_height_m: float
    window_rel: tuple[float, float, float, float]
    floors_parity: int  # 0 = even floor counts, 1 = odd
    window_aspect: float  # canonical width/height of the window opening


@dataclass(frozen=True)
class WindowStyle:
    id: int
    name: str
    panes_x: int
    panes_y: int
    frame_bounds: tuple[float, float]  # shape_params[0] range (frame inset fraction)
    default_frame: float = 0.08


# Window margins stay small (<= 0.10 of tile per axis, both edges combined)
# so the two gradient edges at each tile boundary fuse into one profile peak
# down to 3-floor / 3-column grids. Floor heights spread by >= 15% so height
# per floor alone separates the styles.
_FACADE_STYLES = (
    FacadeStyle(0, "ribbon-wide", 2.8, (0.03, 0.05, 0.94, 0.90), 0, 1.9),
    FacadeStyle(1, "ribbon-tall", 3.3, (0.04, 0.03, 0.92, 0.94), 1, 1.3),
    FacadeStyle(2, "punched-even", 3.9, (0.05, 0.04, 0.90, 0.92), 0, 0.9),
    FacadeStyle(3, "punched-odd", 4.6, (0.045, 0.05, 0.91, 0.90), 1, 0.6),
)

_WINDOW_STYLES = (
    WindowStyle(0, "plain", 1, 1, (0.02, 0.25)),
    WindowStyle(1, "quad", 2, 2, (0.02, 0.25)),
    WindowStyle(2, "triple", 3, 1, (0.02, 0.25)),
    WindowStyle(3, "stacked", 1, 2, (0.02, 0.25)),
)


def facade_styles() -> tuple[FacadeStyle, ...]:
    return _FACADE_STYLES


def facade_style(style_id: int) -> FacadeStyle:
    if not 0 <= style_id < len(_FACADE_STYLES):
        raise UnknownStyleError(f"unknown facade style id {style_id}")
    return _FACADE_STYLES[style_id]


def window_styles() -> tuple[WindowStyle, ...]:
    return _WINDOW_STYLES


def window_style(style_id: int) -> WindowStyle:
    if not 0 <= style_id < len(_WINDOW_STYLES):
        raise UnknownStyleError(f"unknown window style id {style_id}")
    return _WINDOW_STYLES[style_id]


def clamp_shape_params(style: WindowStyle, params) -> tuple[float, ...]:
    lo, hi = style.frame_bounds
    vals = tuple(params) or (style.default_frame,)
    return (float(min(max(vals[0], lo), hi)),)


def _rect_mesh_faces(builder_vertices, builder_faces, quad: FacadeQuad,
                     u0, u1, v0, v1, depth, normal_idx):
    """Append one rectangle on the facade, inset by `depth` along -normal."""
    base = len(builder_vertices)
    o = quad.origin - quad.normal * depth
    for uu, vv in ((u0, v0), (u1, v0), (u1, v1), (u0, v1)):
        builder_vertices.append(o + quad.u * uu + quad.v * vv)
    builder_faces.append(((base, 0, normal_idx), (base + 1, 1, normal_idx), (base + 2, 2, normal_idx)))
    builder_faces.append(((base, 0, normal_idx), (base + 2, 2, normal_idx), (base + 3, 3, normal_idx)))


def _quad_uvs():
    return np.array([(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])


def window_tiles(quad: FacadeQuad, floors: int, columns: int,
                 floor_height: float) -> list[tuple[float, float, float, float]]:
    """Tile rectangles (u0, v0, u1, v1) in facade coordinates, bottom-up rows."""
    if floors * floor_height > quad.height + 1e-9:
        raise GeometryError(
            f"{floors} floors at {floor_height} m exceed facade height {quad.height:.3f} m"
        )
    tw = quad.width / columns
    tiles = []
    for i in range(floors):
        for j in range(columns):
            tiles.append((j * tw, i * floor_height, (j + 1) * tw, (i + 1) * floor_height))
    return tiles


def window_box_in_tile(tile, window_rel) -> tuple[float, float, float, float]:
    """Window opening (u0, v0, u1, v1); rel top is measured from the tile top."""
    u0t, v0t, u1t, v1t = tile
    tw, th = u1t - u0t, v1t - v0t
    left, top, width, height = window_rel
    u0 = u0t + left * tw
    v1 = v1t - top * th
    return (u0, v1 - height * th, u0 + width * tw, v1)


def compose_building(grammar: BuildingGrammar) -> BuildingModel:
    """Instantiate mass, facades, windows, and materials into one model."""
    mstyle = mass_style(grammar.mass.style_id)
    phys = denormalize(mstyle, grammar.mass)
    meshes, facades = instantiate_mass_physical(mstyle.id, phys)

    fac = grammar.facade
    facade_style(fac.style_id)  # range check
    wstyle = window_style(grammar.window.style_id)
    frame_frac = clamp_shape_params(wstyle, grammar.window.shape_params)[0]

    model = BuildingModel(meshes=list(meshes))
    model.materials["wall"] = Material(tuple(int(c) for c in fac.color_rgb))
    model.materials["roof"] = Material(ROOF_RGB)

    any_windows = False
    for quad in facades:
        tiles = window_tiles(quad, fac.floors, fac.columns, fac.floor_height_m)
        frame_verts: list[np.ndarray] = []
        frame_faces: list[tuple] = []
        for tile in tiles:
            u0, v0, u1, v1 = window_box_in_tile(tile, fac.window_rel)
            ww, wh = u1 - u0, v1 - v0
            t = frame_frac * min(ww, wh)

            glass_verts: list[np.ndarray] = []
            glass_faces: list[tuple] = []
            # Pane grid inside the frame band, mullions of thickness t between panes
            px, py = wstyle.panes_x, wstyle.panes_y
            pane_w = (ww - 2 * t - (px - 1) * t) / px
            pane_h = (wh - 2 * t - (py - 1) * t) / py
            if pane_w <= 0 or pane_h <= 0:
                raise GeometryError("frame fraction leaves no room for panes")
            for iy in range(py):
                for ix in range(px):
                    pu0 = u0 + t + ix * (pane_w + t)
                    pv0 = v0 + t + iy * (pane_h + t)
                    _rect_mesh_faces(glass_verts, glass_faces, quad,
                                     pu0, pu0 + pane_w, pv0, pv0 + pane_h,
                                     PANE_DEPTH_M, 0)
            model.meshes.append(Mesh(
                np.asarray(glass_verts), quad.normal.reshape(1, 3).copy(),
                _quad_uvs(), np.asarray(glass_faces, dtype=int),
                group="window", material="window_glass",
            ))
            any_windows = True

            # Frame: border ring plus mullions, flat on the facade plane
            _rect_mesh_faces(frame_verts, frame_faces, quad, u0, u1, v0, v0 + t, 0.0, 0)
            _rect_mesh_faces(frame_verts, frame_faces, quad, u0, u1, v1 - t, v1, 0.0, 0)
            _rect_mesh_faces(frame_verts, frame_faces, quad, u0, u0 + t, v0 + t, v1 - t, 0.0, 0)
            _rect_mesh_faces(frame_verts, frame_faces, quad, u1 - t, u1, v0 + t, v1 - t, 0.0, 0)
            for ix in range(1, px):
                mu = u0 + t + ix * (pane_w + t) - t
                _rect_mesh_faces(frame_verts, frame_faces, quad, mu, mu + t, v0 + t, v1 - t, 0.0, 0)
            for iy in range(1, py):
                mv = v0 + t + iy * (pane_h + t) - t
                _rect_mesh_faces(frame_verts, frame_faces, quad, u0 + t, u1 - t, mv, mv + t, 0.0, 0)

        if frame_faces:
            model.meshes.append(Mesh(
                np.asarray(frame_verts), quad.normal.reshape(1, 3).copy(),
                _quad_uvs(), np.asarray(frame_faces, dtype=int),
                group="wall", material="window_frame",
            ))

    if any_windows:
        model.materials["window_glass"] = Material(GLASS_RGB)
        model.materials["window_frame"] = Material(FRAME_RGB)

    model.validate()
    return model


def window_mesh_count(model: BuildingModel) -> int:
    return sum(1 for m in model.meshes if m.group == "window")
