"""Heuristic recognizers standing in for the learned classifiers.

Each function keeps the type signature a learned model would have, so a
trained implementation can replace the body without touching callers:
mass style <- template chamfer matching, facade style <- grid signature
matching, window style <- tile histogram matching.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import LibraryError
from ..vision import (
    RasterMask,
    SilhouettePolyline,
    chamfer_cached,
    distance_transform,
    rasterize_silhouette,
)
from .library import MassTemplate, StyleLibrary


def input_mask(sil: SilhouettePolyline, lib: StyleLibrary) -> RasterMask:
    return rasterize_silhouette(sil, lib.raster_size, lib.raster_size)


def recognize_mass_candidates(sil: SilhouettePolyline,
                              lib: StyleLibrary) -> list[tuple[int, float]]:
    """Rank every mass style by its best template chamfer score, ascending."""
    if not lib.templates:
        raise LibraryError("library has no mass templates")
    mask = input_mask(sil, lib)
    dt_in = distance_transform(mask)
    best: dict[int, float] = {}
    for t in lib.templates:
        score = chamfer_cached(dt_in, mask.bits, t.dt, t.mask.bits)
        if score < best.get(t.style_id, math.inf):
            best[t.style_id] = score
    if set(best) != {s.id for s in lib.mass_styles}:
        raise LibraryError("some mass styles have no template")
    return sorted(best.items(), key=lambda kv: (kv[1], kv[0]))


def best_template(lib: StyleLibrary, style_id: int, mask: RasterMask,
                  dt_in: np.ndarray) -> tuple[MassTemplate, float]:
    """The style's closest template; its camera seeds the stage-1 optimizer."""
    candidates = lib.templates_for(style_id)
    if not candidates:
        raise LibraryError(f"mass style {style_id} has no template")
    scored = [(chamfer_cached(dt_in, mask.bits, t.dt, t.mask.bits), i, t)
              for i, t in enumerate(candidates)]
    score, _, tmpl = min(scored, key=lambda x: (x[0], x[1]))
    return tmpl, score


def match_facade_style(lib: StyleLibrary, floors: int, window_aspect: float) -> int:
    """Nearest style by floor-count parity plus log window aspect."""
    parity = floors % 2
    best_id, best_d = 0, math.inf
    for style in lib.facade_styles:
        d = 10.0 * (style.floors_parity != parity)
        d += abs(math.log(max(window_aspect, 1e-6)) - math.log(style.window_aspect))
        if d < best_d:
            best_id, best_d = style.id, d
    return best_id


def match_window_style(lib: StyleLibrary, hists: list[np.ndarray]) -> int:
    """Majority vote of nearest-histogram matches; ties go to the lower id."""
    if not hists:
        return 0
    votes = np.zeros(len(lib.window_styles), dtype=int)
    for h in hists:
        dists = [float(np.abs(h - ref).sum()) for ref in lib.window_hists]
        votes[int(np.argmin(dists))] += 1
    return int(np.argmax(votes))
