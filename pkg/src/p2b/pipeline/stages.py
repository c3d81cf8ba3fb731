"""The three reconstruction stages: mass+camera, facade, window.

Stage 1 jointly refines mass parameters and camera pose against the user
silhouette; stages 2 and 3 read evidence off the rectified front facade.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from ..errors import (
    DegenerateCameraError,
    DegenerateHomographyError,
    EmptyMaskError,
    NoStructureError,
    P2BError,
    StageError,
    ValidationError,
)
from ..grammar import (
    FacadeGrammar,
    MassParameters,
    WindowGrammar,
    clamp_shape_params,
    denormalize,
    instantiate_mass,
    mass_facades,
    mass_style,
    window_style,
)
from ..grammar.types import FacadeQuad
from ..optimize import OptProblem, minimize
from ..vision import (
    CameraParams,
    ImageBuffer,
    SilhouettePolyline,
    chamfer_against,
    detect_window,
    distance_transform,
    estimate_grid,
    facade_color,
    project_mass,
    project_points,
)
from ..vision.camera import ELEVATION_RANGE
from ..vision.raster import _mesh_centroid
from .config import PipelineConfig, default_config
from .library import StyleLibrary, dark_extent, tile_histogram
from .recognize import (
    best_template,
    input_mask,
    match_facade_style,
    match_window_style,
    recognize_mass_candidates,
)

log = logging.getLogger(__name__)

# pose search ranges around the seeding template camera
AZIMUTH_SPAN_DEG = 45.0
MAX_ELEVATION_DEG = 45.0
BAD_EVAL = 1.0e6  # objective value for degenerate poses; keeps f total

MIN_RECT_EXTENT_PX = 240  # upscale the photo until the facade spans this


def estimate_mass_and_camera(sil: SilhouettePolyline, lib: StyleLibrary,
                             top_k: int | None = None,
                             config: PipelineConfig | None = None,
                             ) -> tuple[MassParameters, CameraParams, float]:
    """Joint refinement over [mass unit params | az, el, offsets] per candidate.

    Distance and fov stay at the template camera's values: a single photo
    cannot separate building scale from camera distance, so the canonical
    values pin the scale and the remaining pose enters the search vector.
    """
    config = config or default_config()
    k = top_k if top_k is not None else config.top_k
    if k < 1:
        raise ValidationError("top_k must be >= 1")
    size = lib.raster_size

    mask = input_mask(sil, lib)
    dt_in = distance_transform(mask)
    ranked = recognize_mass_candidates(sil, lib)

    best = None
    failures: dict[int, str] = {}
    for style_id, _ in ranked[:k]:
        tmpl, _ = best_template(lib, style_id, mask, dt_in)
        style = mass_style(style_id)
        n = len(style.param_schema)
        cam0 = tmpl.camera

        lower = np.array([0.0] * n + [cam0.azimuth_deg - AZIMUTH_SPAN_DEG, ELEVATION_RANGE[0],
                          -size / 4.0, -size / 4.0])
        upper = np.array([1.0] * n + [cam0.azimuth_deg + AZIMUTH_SPAN_DEG, MAX_ELEVATION_DEG,
                          size / 4.0, size / 4.0])
        span = upper - lower
        x0 = np.array(list(tmpl.params.values_unit)
                      + [cam0.azimuth_deg, cam0.elevation_deg, 0.0, 0.0])

        # Unit params, degrees and pixels differ by two orders of magnitude, so
        # the solver works in a normalized cube where one radius moves them all.
        def objective(z, _style_id=style_id, _n=n, _cam0=cam0):
            x = lower + z * span
            params = MassParameters(_style_id, tuple(np.clip(x[:_n], 0.0, 1.0)))
            az = float(np.clip(x[_n], -180.0, 180.0))
            cam = CameraParams(az, float(x[_n + 1]), _cam0.distance_m, _cam0.fov_deg,
                               float(x[_n + 2]), float(x[_n + 3]))
            try:
                gen = project_mass(instantiate_mass(params), cam, size, size)
                return chamfer_against(dt_in, mask.bits, gen)
            except (DegenerateCameraError, EmptyMaskError):
                return BAD_EVAL

        d = n + 4
        z = (x0 - lower) / span
        remaining = config.stage1_budget
        local = None
        # The pixel-quantized objective stalls the trust region well before the
        # budget runs out; restarting from the incumbent spends the rest.
        while remaining >= 2 * d + 1:
            try:
                result = minimize(objective, z, OptProblem(
                    lower=np.zeros(d), upper=np.ones(d), budget=remaining))
            except P2BError as e:
                failures[style_id] = f"{type(e).__name__}: {e}"
                break
            remaining -= result.evaluations
            improved = local is None or result.f_best < local.f_best - 1e-9
            if local is None or result.f_best < local.f_best:
                local = result
            if result.stop_reason == "budget" or not improved:
                break
            z = local.x_best
        if local is None:
            continue
        if best is None or local.f_best < best[2]:
            xb = lower + local.x_best * span
            u = tuple(float(v) for v in np.clip(xb[:n], 0.0, 1.0))
            cam = CameraParams(float(xb[n]), float(xb[n + 1]),
                               cam0.distance_m, cam0.fov_deg,
                               float(xb[n + 2]), float(xb[n + 3]))
            best = (MassParameters(style_id, u), cam, float(local.f_best))

    if best is None:
        raise StageError("mass_camera", "all candidate optimizations failed", failures)
    return best


@dataclass
class FacadeEvidence:
    """Everything stage 2 measured, reused by stage 3 to avoid rework."""

    quad: FacadeQuad | None
    rect: ImageBuffer | None
    row_bounds: list[int] | None
    col_bounds: list[int] | None
    window_boxes: list  # per detected tile: WindowBox
    tile_hists: list  # per detected tile: histogram over the dark extent
    warnings: list[str]

    @property
    def floors(self) -> int:
        return len(self.row_bounds) - 1 if self.row_bounds else 1

    @property
    def columns(self) -> int:
        return len(self.col_bounds) - 1 if self.col_bounds else 1


def _front_facade(facades: list[FacadeQuad], camera: CameraParams,
                  centroid: np.ndarray) -> FacadeQuad | None:
    """The facade whose outward normal lines up best with the view direction."""
    eye = camera.eye()
    best, best_dot = None, 0.0
    for quad in facades:
        center = quad.origin + 0.5 * quad.width * quad.u + 0.5 * quad.height * quad.v
        to_eye = eye - center
        norm = np.linalg.norm(to_eye)
        if norm < 1e-9:
            continue
        d = float(np.dot(quad.normal, to_eye / norm))
        if d > best_dot:
            best, best_dot = quad, d
    return best


def _upscale(image: ImageBuffer, k: int) -> ImageBuffer:
    if k <= 1:
        return image
    return ImageBuffer(np.repeat(np.repeat(image.rgb, k, axis=0), k, axis=1))


def gather_facade_evidence(image: ImageBuffer, mass: MassParameters,
                           camera: CameraParams,
                           config: PipelineConfig | None = None) -> FacadeEvidence:
    """Rectify the front facade and measure grid, windows, and histograms."""
    from ..vision.rectify import rectify_facade

    config = config or default_config()
    ev = FacadeEvidence(None, None, None, None, [], [], [])

    style = mass_style(mass.style_id)
    phys = denormalize(style, mass)
    facades = mass_facades(mass.style_id, phys)
    meshes = instantiate_mass(mass)
    centroid = _mesh_centroid(meshes)
    quad = _front_facade(facades, camera, centroid)
    if quad is None:
        ev.warnings.append("no camera-facing rectangular facade; using defaults")
        return ev
    ev.quad = quad

    corners = quad.corners()  # BL, BR, TR, TL in world space
    pix, depth = project_points(corners, camera, centroid, image.w, image.h)
    if np.any(np.isnan(pix)) or np.any(depth <= 0):
        ev.warnings.append("facade corners fall behind the camera; using defaults")
        return ev

    # denser sampling for small facades so grid peaks stay separable
    span = max(np.linalg.norm(pix[3] - pix[0]), np.linalg.norm(pix[1] - pix[0]))
    k = int(np.clip(np.ceil(MIN_RECT_EXTENT_PX / max(span, 1.0)), 1, 6))
    quad_px = np.array([pix[3], pix[0], pix[1], pix[2]]) * k  # TL, BL, BR, TR
    try:
        rect = rectify_facade(_upscale(image, k), quad_px)
    except (DegenerateHomographyError, ValidationError) as e:
        ev.warnings.append(f"rectification failed: {e}")
        return ev
    ev.rect = rect

    try:
        grid = estimate_grid(rect, separation=config.grid_separation)
    except (NoStructureError, ValidationError) as e:
        ev.warnings.append(f"grid estimation fell back to 1x1: {e}")
        return ev
    ev.row_bounds = grid.row_bounds
    ev.col_bounds = grid.col_bounds

    for i in range(grid.floors):
        for j in range(grid.columns):
            y0, y1 = grid.row_bounds[i], grid.row_bounds[i + 1]
            x0, x1 = grid.col_bounds[j], grid.col_bounds[j + 1]
            if y1 - y0 < 8 or x1 - x0 < 8:
                continue
            tile = ImageBuffer(rect.rgb[y0:y1, x0:x1])
            box = detect_window(tile)
            if box is not None:
                ev.window_boxes.append(box)
            extent = dark_extent(tile)
            if extent is not None:
                ev.tile_hists.append(tile_histogram(tile, extent))
    return ev


def _refine_facade_fit(row_bounds, median_rel, config: PipelineConfig):
    """Least-squares polish of floor pitch and window box via the minimizer."""
    rb = np.asarray(row_bounds, dtype=float)
    floors = len(rb) - 1
    pitch = (rb[-1] - rb[0]) / floors
    ml, mt, mw, mh = median_rel

    lower = np.array([0.5 * pitch, 1e-3, 1e-3, 0.05, 0.05])
    upper = np.array([1.5 * pitch, 0.5, 0.5, 0.997, 0.997])
    x0 = np.clip(np.array([pitch, ml, mt, mw, mh]), lower, upper)

    def objective(x):
        h, left, top, width, height = x
        rows = rb[0] + h * np.arange(floors + 1)
        cost = float(np.mean((rows - rb) ** 2)) / max(pitch, 1.0) ** 2
        cost += (left - ml) ** 2 + (top - mt) ** 2 + (width - mw) ** 2 + (height - mh) ** 2
        cost += 100.0 * max(0.0, left + width - 0.998) ** 2
        cost += 100.0 * max(0.0, top + height - 0.998) ** 2
        return cost

    problem = OptProblem(lower=lower, upper=upper, budget=config.facade_budget)
    result = minimize(objective, x0, problem)
    return result.x_best


def facade_stage(image: ImageBuffer, mass: MassParameters, camera: CameraParams,
                 lib: StyleLibrary, config: PipelineConfig | None = None,
                 evidence: FacadeEvidence | None = None) -> FacadeGrammar:
    """Grid, window box, style, and color for the front facade."""
    config = config or default_config()
    ev = evidence if evidence is not None else gather_facade_evidence(
        image, mass, camera, config)
    for w in ev.warnings:
        log.warning("facade stage: %s", w)

    default_style = lib.facade_styles[0]
    if ev.quad is None or ev.rect is None:
        # no usable facade; keep style defaults and sample color off the photo center
        crop = ImageBuffer(image.rgb[image.h // 3: 2 * image.h // 3,
                                     image.w // 3: 2 * image.w // 3])
        color = facade_color(crop, k=config.kmeans_k, seed=config.kmeans_seed)
        return FacadeGrammar(default_style.id, 1, 1, default_style.floor_height_m,
                             default_style.window_rel, color)

    quad = ev.quad
    if ev.row_bounds is None:
        color = facade_color(ev.rect, k=config.kmeans_k, seed=config.kmeans_seed)
        return FacadeGrammar(default_style.id, 1, 1, quad.height,
                             default_style.window_rel, color)

    floors, columns = ev.floors, ev.columns
    rect_h = float(ev.row_bounds[-1] - ev.row_bounds[0]) + 1e-9
    tile_w = (ev.col_bounds[-1] - ev.col_bounds[0]) / columns
    tile_h = rect_h / floors

    if ev.window_boxes:
        median_rel = tuple(
            float(np.median([getattr(b, f) for b in ev.window_boxes]))
            for f in ("rel_left", "rel_top", "rel_width", "rel_height"))
    else:
        log.warning("facade stage: no windows detected; using style default box")
        median_rel = default_style.window_rel

    aspect = (median_rel[2] * tile_w) / max(median_rel[3] * tile_h, 1e-9)
    style_id = match_facade_style(lib, floors, aspect)

    h_px, left, top, width, height = _refine_facade_fit(ev.row_bounds, median_rel, config)

    eps = 1e-3
    left = float(np.clip(left, eps, 1.0 - 2 * eps))
    top = float(np.clip(top, eps, 1.0 - 2 * eps))
    width = float(np.clip(width, eps, 1.0 - left - eps))
    height = float(np.clip(height, eps, 1.0 - top - eps))

    # rectified pixels are metric-uniform, so pitch converts by plain ratio;
    # the tile grid must still fit under the facade height
    floor_height = quad.height * float(h_px) / float(ev.rect.h)
    floor_height = min(floor_height, quad.height / floors * (1.0 - 1e-6))

    windows_abs = []
    for i in range(floors):
        for j in range(columns):
            y0 = ev.row_bounds[i]
            x0 = ev.col_bounds[j]
            th = ev.row_bounds[i + 1] - y0
            tw = ev.col_bounds[j + 1] - x0
            windows_abs.append((x0 + left * tw, y0 + top * th,
                                x0 + (left + width) * tw, y0 + (top + height) * th))
    color = facade_color(ev.rect, windows_abs, k=config.kmeans_k, seed=config.kmeans_seed)

    return FacadeGrammar(style_id, floors, columns, floor_height,
                         (left, top, width, height), color)


def window_stage(rect: ImageBuffer | None, evidence: FacadeEvidence,
                 lib: StyleLibrary, config: PipelineConfig | None = None) -> WindowGrammar:
    """Vote a window style from tile histograms; scale the frame by aspect."""
    style_id = match_window_style(lib, evidence.tile_hists)
    style = window_style(style_id)

    if evidence.window_boxes:
        aspects = [b.rel_width / b.rel_height for b in evidence.window_boxes]
        aspect = float(np.median(aspects))
        # wider-than-canonical openings get a proportionally heavier frame
        canonical = lib.facade_styles[0].window_rel
        canonical_aspect = canonical[2] / canonical[3]
        frame = 0.08 * aspect / canonical_aspect
    else:
        frame = style.default_frame
    return WindowGrammar(style_id, clamp_shape_params(style, (frame,)))
