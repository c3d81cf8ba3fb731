"""End-to-end job: silhouette fit, facade read-out, window vote, OBJ export."""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field

from ..errors import P2BError, StageError, ValidationError
from ..grammar import BuildingGrammar, compose_building, export_obj
from ..vision import CameraParams, ImageBuffer, SilhouettePolyline
from .config import PipelineConfig, default_config
from .library import StyleLibrary
from .stages import estimate_mass_and_camera, facade_stage, gather_facade_evidence, window_stage

PROGRESS_STEPS = (("mass_camera", 5), ("facade", 60), ("window", 85), ("export", 100))
_STAGE_NAMES = frozenset(s for s, _ in PROGRESS_STEPS)


@dataclass(frozen=True)
class StageProgress:
    stage: str
    percent: int

    def __post_init__(self):
        if self.stage not in _STAGE_NAMES:
            raise ValidationError(f"unknown stage {self.stage!r}")
        if not 0 <= self.percent <= 100:
            raise ValidationError(f"percent {self.percent} outside 0..100")


@dataclass(frozen=True)
class ReconstructionRequest:
    image: ImageBuffer
    silhouette: SilhouettePolyline
    config: PipelineConfig = field(default_factory=default_config)

    def __post_init__(self):
        if (self.silhouette.image_w, self.silhouette.image_h) != (self.image.w, self.image.h):
            raise ValidationError(
                f"silhouette drawn on {self.silhouette.image_w}x{self.silhouette.image_h}, "
                f"photo is {self.image.w}x{self.image.h}")


@dataclass(frozen=True)
class ReconstructionResult:
    grammar: BuildingGrammar
    camera: CameraParams
    residual: float
    stage_timings_ms: tuple[float, float, float]
    output_files: tuple[str, ...]


def reconstruct(req: ReconstructionRequest, lib: StyleLibrary,
                progress_sink=None, out_dir=".") -> ReconstructionResult:
    """Run the three stages in order and export model.obj/model.mtl."""
    emit = progress_sink or (lambda p: None)
    config = req.config

    emit(StageProgress("mass_camera", 5))
    t0 = time.perf_counter()
    try:
        mass, camera, residual = estimate_mass_and_camera(
            req.silhouette, lib, config.top_k, config)
    except StageError:
        raise
    except P2BError as e:
        raise StageError("mass_camera", str(e)) from e
    t1 = time.perf_counter()

    emit(StageProgress("facade", 60))
    try:
        evidence = gather_facade_evidence(req.image, mass, camera, config)
        facade = facade_stage(req.image, mass, camera, lib, config, evidence)
    except P2BError as e:
        raise StageError("facade", str(e)) from e
    t2 = time.perf_counter()

    emit(StageProgress("window", 85))
    try:
        window = window_stage(evidence.rect, evidence, lib, config)
        grammar = BuildingGrammar(mass, facade, window)
        model = compose_building(grammar)
        paths = export_obj(model, out_dir)
        obj_path, mtl_path = paths["obj"], paths["mtl"]
    except P2BError as e:
        raise StageError("window", str(e)) from e
    except OSError as e:
        raise StageError("export", str(e)) from e
    t3 = time.perf_counter()

    emit(StageProgress("export", 100))
    timings = ((t1 - t0) * 1000.0, (t2 - t1) * 1000.0, (t3 - t2) * 1000.0)
    return ReconstructionResult(grammar, camera, residual, timings,
                                (os.fspath(obj_path), os.fspath(mtl_path)))
