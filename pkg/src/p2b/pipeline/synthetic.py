"""Forward-model corpus: known grammars rendered into photo + silhouette.

Each case is generated from a ground-truth grammar through the same
geometry and renderer the reconstruction is tested against, so recovered
parameters have an exact reference. Camera distance and field of view are
pinned to the canonical values: one photo cannot separate building scale
from camera distance, so the corpus does not pretend otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..grammar import (
    BuildingGrammar,
    FacadeGrammar,
    MassParameters,
    WindowGrammar,
    compose_building,
    facade_style,
    instantiate_mass,
    mass_style,
)
from ..grammar.mass import BOX, CYLINDER, LSHAPE, SETBACK
from ..vision import (
    CameraParams,
    ImageBuffer,
    SilhouettePolyline,
    project_mass_coverage,
    render_model,
    trace_boundary,
)
from ..vision.raster import _mesh_centroid
from .config import PipelineConfig, default_config
from .library import CANONICAL_AZIMUTHS, CANONICAL_ELEVATION_DEG

CASE_COUNT = 20
PARAPET_FRACTION = 0.3  # of one floor height, above the top window row

_CASE_ELEVATIONS = (10.0, 25.0, 15.0, 30.0, 20.0)
_WALL_PALETTE = (
    (176, 168, 150),
    (188, 158, 140),
    (160, 170, 180),
    (198, 186, 168),
    (170, 152, 134),
)


@dataclass(frozen=True)
class SyntheticCase:
    index: int
    grammar: BuildingGrammar
    camera: CameraParams
    image: ImageBuffer
    silhouette: SilhouettePolyline
    phys: tuple[float, ...]  # ground-truth physical mass parameters


def _unit_params(style_id: int, phys) -> MassParameters:
    schema = mass_style(style_id).param_schema
    units = []
    for spec, v in zip(schema, phys):
        u = (v - spec.lower) / (spec.upper - spec.lower)
        if not 0.0 <= u <= 1.0:
            raise ValueError(f"{spec.name}={v} outside [{spec.lower}, {spec.upper}]")
        units.append(float(u))
    return MassParameters(style_id, tuple(units))


def _facade_floors(case: int, fstyle) -> int:
    """Floors 3..17, matched to the style's parity and its height bounds."""
    floors = 3 + case
    cap = int(60.0 / fstyle.floor_height_m - PARAPET_FRACTION)  # setback lower tier limit
    floors = min(floors, 17, cap)
    if floors % 2 != fstyle.floors_parity:
        floors += 1 if floors + 1 <= min(17, cap) else -1
    return floors


def generate_case(index: int, config: PipelineConfig | None = None) -> SyntheticCase:
    """Deterministically build corpus case `index` (0..19)."""
    if not 0 <= index < CASE_COUNT:
        raise ValueError(f"case index {index} outside 0..{CASE_COUNT - 1}")
    config = config or default_config()
    size = config.raster_size

    mass_id = index // 5
    cam_i = index % 5
    camera = CameraParams(CANONICAL_AZIMUTHS[cam_i], _CASE_ELEVATIONS[cam_i],
                          config.canonical_distance_m, config.canonical_fov_deg)

    fstyle = facade_style(index % 4)
    fh = fstyle.floor_height_m
    rel = fstyle.window_rel

    if mass_id == CYLINDER:
        # no rectangular facade to read, so the grammar keeps a degenerate 1x1 grid
        floors, columns = 1, 1
        radius = 8.0 + 2.0 * cam_i
        height = 32.0 + 6.0 * cam_i
        phys = (radius, height)
        facade = FacadeGrammar(fstyle.id, floors, columns, fh, rel,
                               _WALL_PALETTE[index % 5])
    else:
        floors = _facade_floors(index, fstyle)
        columns = 3 + (index % 6)
        # column width that reproduces the style's canonical window aspect
        tile_w = fstyle.window_aspect * (rel[3] * fh) / rel[2]
        width = columns * tile_w
        facade_h = floors * fh + PARAPET_FRACTION * fh
        if mass_id == BOX:
            phys = (width, width, facade_h)
        elif mass_id == SETBACK:
            upper = float(np.clip(0.4 * facade_h, 3.0, 40.0))
            phys = (width, width, facade_h, upper, 0.55)
        elif mass_id == LSHAPE:
            phys = (width, width, facade_h, 0.5, 0.5)
        else:
            raise ValueError(f"unhandled mass style {mass_id}")
        facade = FacadeGrammar(fstyle.id, floors, columns, fh, rel,
                               _WALL_PALETTE[index % 5])

    mass = _unit_params(mass_id, phys)
    # plain windows keep the per-tile dark box in one piece, so the box
    # evidence stays meaningful; mullioned styles are exercised separately
    grammar = BuildingGrammar(mass, facade, WindowGrammar(0, (0.08,)))

    model = compose_building(grammar)
    mass_meshes = instantiate_mass(mass)
    look_at = _mesh_centroid(mass_meshes)
    image = render_model(model, camera, size, size, look_at=look_at)
    coverage = project_mass_coverage(mass_meshes, camera, size, size)
    silhouette = trace_boundary(coverage)
    return SyntheticCase(index, grammar, camera, image, silhouette, tuple(map(float, phys)))


def generate_corpus(config: PipelineConfig | None = None) -> list[SyntheticCase]:
    return [generate_case(i, config) for i in range(CASE_COUNT)]
