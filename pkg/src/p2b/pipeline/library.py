"""Preloaded recognizer library: reference masks and window templates.

Workers build or load this once at startup and keep it in memory for the
life of the process. Mass recognition compares the user silhouette against
pre-rendered masks of each mass style at a handful of canonical cameras;
window recognition compares per-tile luminance histograms against
histograms of synthesized reference tiles.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from ..errors import LibraryError
from ..grammar import (
    MassParameters,
    MassStyle,
    WindowStyle,
    facade_styles,
    instantiate_mass,
    mass_styles,
    window_styles,
)
from ..grammar.compose import FRAME_RGB, GLASS_RGB, FacadeStyle
from ..vision import (
    CameraParams,
    ImageBuffer,
    RasterMask,
    decode_image,
    distance_transform,
    encode_png,
    project_mass,
)
from .config import PipelineConfig, default_config

CANONICAL_AZIMUTHS = (-60.0, -30.0, 0.0, 30.0, 60.0)
CANONICAL_ELEVATION_DEG = 18.0
LIBRARY_VERSION = 1
HIST_BINS = 16

# Unit-cube size sweep for the reference masks: planform x vertical levels.
# One mid-size mask per style cannot rank a small or squat building; the
# cross product keeps every style represented across footprints and heights,
# so ranking compares shapes rather than whichever size grid fits best.
_PLANFORM_LEVELS = (0.15, 0.35, 0.55, 0.75)
_VERTICAL_LEVELS = (0.1, 0.3, 0.55, 0.8)
_TEMPLATE_LEVELS = tuple((p, v) for p in _PLANFORM_LEVELS for v in _VERTICAL_LEVELS)

# Reference tile geometry for window-style histograms. The box aspect is
# kept away from 1 and 2 so mullion layouts with equal bar area still
# produce distinct bright fractions.
_TILE_W, _TILE_H = 96, 72
_TILE_BOX = (12, 10, 84, 62)  # window opening, half-open pixel box
_TILE_WALL = (176, 168, 150)


@dataclass(frozen=True)
class MassTemplate:
    """One pre-rendered silhouette mask with its distance transform.

    Carries the exact parameters it was rendered from so a match can seed
    the refinement at the template itself, not at a generic midpoint.
    """

    style_id: int
    params: MassParameters
    camera: CameraParams
    mask: RasterMask
    dt: np.ndarray


@dataclass(frozen=True)
class StyleLibrary:
    raster_size: int
    mass_styles: tuple[MassStyle, ...]
    facade_styles: tuple[FacadeStyle, ...]
    window_styles: tuple[WindowStyle, ...]
    templates: tuple[MassTemplate, ...]
    window_hists: tuple[np.ndarray, ...]  # one normalized histogram per window style

    def __post_init__(self):
        if not self.mass_styles or not self.facade_styles or not self.window_styles:
            raise LibraryError("style lists must be non-empty")
        ids = {s.id for s in self.mass_styles}
        for t in self.templates:
            if t.style_id not in ids:
                raise LibraryError(f"template tagged with unknown mass style {t.style_id}")

    def templates_for(self, style_id: int) -> list[MassTemplate]:
        return [t for t in self.templates if t.style_id == style_id]


def render_window_tile(style: WindowStyle, frame_frac: float = 0.08) -> ImageBuffer:
    """Paint the reference tile for one window style: wall, panes, mullions.

    Mirrors the opening layout of compose_building in 2D: a frame ring of
    thickness t inside the opening, then a panes_x by panes_y grid separated
    by bars of the same thickness.
    """
    buf = np.empty((_TILE_H, _TILE_W, 3), dtype=np.uint8)
    buf[:, :] = _TILE_WALL
    x0, y0, x1, y1 = _TILE_BOX
    bw, bh = x1 - x0, y1 - y0
    t = max(1, int(round(frame_frac * min(bw, bh))))
    buf[y0:y1, x0:x1] = FRAME_RGB
    px, py = style.panes_x, style.panes_y
    pane_w = (bw - 2 * t - (px - 1) * t) / px
    pane_h = (bh - 2 * t - (py - 1) * t) / py
    if pane_w < 1 or pane_h < 1:
        raise LibraryError(f"window style {style.id}: panes vanish at tile scale")
    for iy in range(py):
        for ix in range(px):
            ax = x0 + t + ix * (pane_w + t)
            ay = y0 + t + iy * (pane_h + t)
            buf[int(round(ay)):int(round(ay + pane_h)),
                int(round(ax)):int(round(ax + pane_w))] = GLASS_RGB
    return ImageBuffer(buf)


def dark_extent(tile: ImageBuffer, min_area_frac: float = 0.005):
    """Bounding box over all dark blobs: the window opening, mullions included.

    Unlike the largest single blob, this spans panes split by mullions.
    Returns (x0, y0, x1, y1) half-open, or None when nothing qualifies.
    """
    from scipy import ndimage

    lum = tile.luminance()
    if lum.max() - lum.min() < 1e-9:
        return None
    cut = lum.min() + 0.5 * (lum.max() - lum.min())
    dark = lum < cut
    labels, n = ndimage.label(dark)
    if n == 0:
        return None
    areas = ndimage.sum_labels(np.ones_like(labels), labels, np.arange(1, n + 1))
    keep = np.isin(labels, np.nonzero(areas >= min_area_frac * tile.w * tile.h)[0] + 1)
    if not keep.any():
        return None
    ys, xs = np.nonzero(keep)
    return (int(xs.min()), int(ys.min()), int(xs.max()) + 1, int(ys.max()) + 1)


def tile_histogram(tile: ImageBuffer, box) -> np.ndarray:
    """Normalized luminance histogram inside the box; the style fingerprint."""
    x0, y0, x1, y1 = box
    lum = tile.luminance()[y0:y1, x0:x1]
    hist, _ = np.histogram(lum, bins=HIST_BINS, range=(0.0, 256.0))
    total = hist.sum()
    if total == 0:
        raise LibraryError("empty histogram region")
    return hist / total


def _window_hist(style: WindowStyle) -> np.ndarray:
    tile = render_window_tile(style)
    box = dark_extent(tile)
    if box is None:
        raise LibraryError(f"window style {style.id}: reference tile has no dark region")
    return tile_histogram(tile, box)


def _template_units(style: MassStyle, planform: float, vertical: float) -> tuple[float, ...]:
    units = []
    for spec in style.param_schema:
        if "height" in spec.name:
            units.append(vertical)
        elif spec.name in ("width", "depth", "radius"):
            units.append(planform)
        else:
            units.append(0.5)  # shape fractions stay canonical
    return tuple(units)


def build_library(config: PipelineConfig | None = None) -> StyleLibrary:
    """Render all recognizer templates from the style registries."""
    config = config or default_config()
    size = config.raster_size
    templates = []
    for style in mass_styles():
        for planform, vertical in _TEMPLATE_LEVELS:
            params = MassParameters(style.id, _template_units(style, planform, vertical))
            meshes = instantiate_mass(params)
            for az in CANONICAL_AZIMUTHS:
                cam = CameraParams(az, CANONICAL_ELEVATION_DEG,
                                   config.canonical_distance_m, config.canonical_fov_deg)
                mask = project_mass(meshes, cam, size, size)
                templates.append(
                    MassTemplate(style.id, params, cam, mask, distance_transform(mask)))
    hists = tuple(_window_hist(s) for s in window_styles())
    return StyleLibrary(size, mass_styles(), facade_styles(), window_styles(),
                        tuple(templates), hists)


def write_library(lib: StyleLibrary, out_dir):
    """Persist the template masks plus a small manifest."""
    os.makedirs(out_dir, exist_ok=True)
    lines = [
        f"version = {LIBRARY_VERSION}",
        f"raster_size = {lib.raster_size}",
        f"templates = {len(lib.templates)}",
    ]
    for i, t in enumerate(lib.templates):
        cam = t.camera
        units = " ".join(repr(u) for u in t.params.values_unit)
        lines.append(
            f"template_{i} = {t.style_id} {cam.azimuth_deg} {cam.elevation_deg} "
            f"{cam.distance_m} {cam.fov_deg} {units}"
        )
        rgb = np.where(t.mask.bits[..., None], 255, 0).astype(np.uint8)
        rgb = np.repeat(rgb, 3, axis=2)
        with open(os.path.join(out_dir, f"template_{i}.png"), "wb") as fh:
            fh.write(encode_png(ImageBuffer(rgb)))
    with open(os.path.join(out_dir, "library.cfg"), "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def load_library(lib_dir) -> StyleLibrary:
    """Read masks back; distance transforms and histograms are recomputed."""
    cfg_path = os.path.join(lib_dir, "library.cfg")
    if not os.path.isfile(cfg_path):
        raise LibraryError(f"no library manifest at {cfg_path}")
    kv = {}
    with open(cfg_path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line and "=" in line:
                k, _, v = line.partition("=")
                kv[k.strip()] = v.strip()
    if kv.get("version") != str(LIBRARY_VERSION):
        raise LibraryError(f"library version {kv.get('version')!r}, expected {LIBRARY_VERSION}")
    try:
        size = int(kv["raster_size"])
        count = int(kv["templates"])
    except (KeyError, ValueError) as e:
        raise LibraryError(f"malformed library manifest: {e}") from None

    templates = []
    for i in range(count):
        try:
            sid, az, el, dist, fov, *units = kv[f"template_{i}"].split()
            if not units:
                raise ValueError("missing unit params")
        except (KeyError, ValueError):
            raise LibraryError(f"manifest entry template_{i} missing or malformed") from None
        png_path = os.path.join(lib_dir, f"template_{i}.png")
        try:
            with open(png_path, "rb") as fh:
                img = decode_image(fh.read())
        except OSError as e:
            raise LibraryError(f"cannot read {png_path}: {e}") from None
        if (img.w, img.h) != (size, size):
            raise LibraryError(f"{png_path}: size {img.w}x{img.h}, expected {size}x{size}")
        mask = RasterMask(img.luminance() > 127.0)
        cam = CameraParams(float(az), float(el), float(dist), float(fov))
        params = MassParameters(int(sid), tuple(float(u) for u in units))
        templates.append(MassTemplate(int(sid), params, cam, mask, distance_transform(mask)))

    hists = tuple(_window_hist(s) for s in window_styles())
    return StyleLibrary(size, mass_styles(), facade_styles(), window_styles(),
                        tuple(templates), hists)


def load_or_build(config: PipelineConfig | None = None, lib_dir=None) -> StyleLibrary:
    if lib_dir and os.path.isfile(os.path.join(lib_dir, "library.cfg")):
        return load_library(lib_dir)
    return build_library(config)
