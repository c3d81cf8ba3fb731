"""Reconstruction tuning knobs and their key/value file format.

The file format is deliberately plain so deployments can tweak budgets
without touching code: one `key = value` per line, `#` comments, keys
matching the PipelineConfig field names exactly.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

from ..errors import ValidationError


@dataclass(frozen=True)
class PipelineConfig:
    raster_size: int = 256          # working resolution for silhouette fitting
    stage1_budget: int = 400        # objective evaluations per mass candidate
    facade_budget: int = 150        # objective evaluations for facade refinement
    top_k: int = 2                  # mass styles carried into stage-1 refinement
    kmeans_k: int = 10              # color clusters, CIELAB space
    kmeans_seed: int = 42
    grid_separation: float = 0.04   # min peak spacing, fraction of image extent
    canonical_distance_m: float = 120.0  # fixed: one photo cannot pin scale
    canonical_fov_deg: float = 45.0

    def __post_init__(self):
        if self.raster_size < 32:
            raise ValidationError("raster_size must be at least 32")
        if self.stage1_budget < 50 or self.facade_budget < 20:
            raise ValidationError("optimizer budgets too small to fit a model")
        if self.top_k < 1:
            raise ValidationError("top_k must be >= 1")
        if self.kmeans_k < 1:
            raise ValidationError("kmeans_k must be >= 1")
        if not 0.0 < self.grid_separation < 0.5:
            raise ValidationError("grid_separation must be in (0, 0.5)")
        if self.canonical_distance_m <= 0:
            raise ValidationError("canonical_distance_m must be positive")


def default_config() -> PipelineConfig:
    return PipelineConfig()


def parse_config(text: str) -> PipelineConfig:
    """Parse `key = value` lines into a PipelineConfig."""
    fields = {f.name: f.type for f in dataclasses.fields(PipelineConfig)}
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(f"config line {lineno}: expected key = value, got {raw!r}")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key not in fields:
            raise ValidationError(f"config line {lineno}: unknown key {key!r}")
        caster = float if "float" in str(fields[key]) else int
        try:
            values[key] = caster(val)
        except ValueError:
            raise ValidationError(f"config line {lineno}: bad value {val!r} for {key}") from None
    return PipelineConfig(**values)


def load_config(path) -> PipelineConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


def write_config(config: PipelineConfig, path):
    lines = [f"{f.name} = {getattr(config, f.name)}" for f in dataclasses.fields(PipelineConfig)]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
