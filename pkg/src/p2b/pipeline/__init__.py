"""Photo + silhouette to building grammar, in three stages."""

from .config import PipelineConfig, default_config, load_config, parse_config, write_config
from .library import (
    CANONICAL_AZIMUTHS,
    CANONICAL_ELEVATION_DEG,
    MassTemplate,
    StyleLibrary,
    build_library,
    load_library,
    load_or_build,
    render_window_tile,
    write_library,
)
from .recognize import (
    match_facade_style,
    match_window_style,
    recognize_mass_candidates,
)
from .reconstruct import (
    ReconstructionRequest,
    ReconstructionResult,
    StageProgress,
    reconstruct,
)
from .stages import (
    FacadeEvidence,
    estimate_mass_and_camera,
    facade_stage,
    gather_facade_evidence,
    window_stage,
)
from .synthetic import CASE_COUNT, SyntheticCase, generate_case, generate_corpus

__all__ = [
    "PipelineConfig", "default_config", "load_config", "parse_config", "write_config",
    "CANONICAL_AZIMUTHS", "CANONICAL_ELEVATION_DEG", "MassTemplate", "StyleLibrary",
    "build_library", "load_library", "load_or_build", "render_window_tile", "write_library",
    "match_facade_style", "match_window_style", "recognize_mass_candidates",
    "ReconstructionRequest", "ReconstructionResult", "StageProgress", "reconstruct",
    "FacadeEvidence", "estimate_mass_and_camera", "facade_stage",
    "gather_facade_evidence", "window_stage",
    "CASE_COUNT", "SyntheticCase", "generate_case", "generate_corpus",
]
