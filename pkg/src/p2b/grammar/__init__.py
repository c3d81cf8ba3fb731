"""Procedural building grammars: mass shapes, facade subdivision, window panes."""

from .compose import (
    FacadeStyle,
    WindowStyle,
    clamp_shape_params,
    compose_building,
    facade_style,
    facade_styles,
    window_box_in_tile,
    window_mesh_count,
    window_style,
    window_styles,
    window_tiles,
)
from .mass import (
    denormalize,
    instantiate_mass,
    instantiate_mass_physical,
    mass_facades,
    mass_style,
    mass_styles,
)
from .objio import export_obj, parse_mtl, parse_obj
from .types import (
    BuildingGrammar,
    BuildingModel,
    FacadeGrammar,
    FacadeQuad,
    MassParameters,
    MassStyle,
    Material,
    Mesh,
    ParamSpec,
    WindowGrammar,
)

__all__ = [
    "BuildingGrammar", "BuildingModel", "FacadeGrammar", "FacadeQuad",
    "MassParameters", "MassStyle", "Material", "Mesh", "ParamSpec",
    "WindowGrammar", "FacadeStyle", "WindowStyle",
    "mass_styles", "mass_style", "denormalize", "instantiate_mass",
    "instantiate_mass_physical", "mass_facades",
    "facade_styles", "facade_style", "window_styles", "window_style",
    "clamp_shape_params", "window_tiles", "window_box_in_tile",
    "compose_building", "window_mesh_count",
    "export_obj", "parse_obj", "parse_mtl",
]
