"""Value types for building grammars and meshes.

Conventions used everywhere: meters, y-up, front facade faces +z,
mass base on the y=0 plane and centered at the origin in x/z.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import SchemaError


@dataclass(frozen=True)
class ParamSpec:
    """One physical parameter: name, inclusive bounds, unit label."""

    name: str
    lower: float
    upper: float
    unit: str = "m"

    def __post_init__(self):
        if not self.lower < self.upper:
            raise SchemaError(f"{self.name}: lower {self.lower} must be < upper {self.upper}")


@dataclass(frozen=True)
class MassStyle:
    """A parameterized building-mass rule (box, L-shape, ...)."""

    id: int
    name: str
    param_schema: tuple[ParamSpec, ...]

    def __post_init__(self):
        if not self.param_schema:
            raise SchemaError(f"mass style {self.name!r} has an empty parameter schema")


@dataclass(frozen=True)
class MassParameters:
    """Unit-cube parameter values for one mass style."""

    style_id: int
    values_unit: tuple[float, ...]

    def __post_init__(self):
        for v in self.values_unit:
            if not 0.0 <= v <= 1.0:
                raise SchemaError(f"unit parameter {v} outside [0, 1]")


@dataclass(frozen=True)
class FacadeGrammar:
    style_id: int
    floors: int
    columns: int
    floor_height_m: float
    window_rel: tuple[float, float, float, float]  # (left, top, width, height) in the unit tile
    color_rgb: tuple[int, int, int]

    def __post_init__(self):
        if self.floors < 1 or self.columns < 1:
            raise SchemaError("floors and columns must be positive")
        if self.floor_height_m <= 0:
            raise SchemaError("floor height must be positive")
        left, top, width, height = self.window_rel
        for v in self.window_rel:
            if not 0.0 < v < 1.0:
                raise SchemaError(f"window_rel component {v} outside (0, 1)")
        if left + width > 1.0 + 1e-9 or top + height > 1.0 + 1e-9:
            raise SchemaError("window_rel box leaves the unit tile")
        for c in self.color_rgb:
            if not 0 <= int(c) <= 255:
                raise SchemaError("color channel outside 0..255")


@dataclass(frozen=True)
class WindowGrammar:
    style_id: int
    shape_params: tuple[float, ...]


@dataclass(frozen=True)
class BuildingGrammar:
    """Everything the final geometry needs: mass, facade, and window rules."""

    mass: MassParameters
    facade: FacadeGrammar
    window: WindowGrammar


@dataclass
class Mesh:
    """Indexed triangle mesh. Faces index vertices/normals/uvs in lockstep."""

    vertices: np.ndarray  # (nv, 3) float64, meters
    normals: np.ndarray  # (nn, 3) float64, unit length
    uvs: np.ndarray  # (nt, 2) float64
    faces: np.ndarray  # (nf, 3, 3) int: per corner (v, vt, vn) indices, 0-based
    group: str = "wall"  # wall | window | roof | door
    material: str = "wall"

    def validate(self):
        nv, nt, nn = len(self.vertices), len(self.uvs), len(self.normals)
        f = np.asarray(self.faces)
        if f.size and (
            f[:, :, 0].max() >= nv
            or f[:, :, 1].max() >= max(nt, 1)
            or f[:, :, 2].max() >= nn
        ):
            raise SchemaError(f"face index out of range in mesh group {self.group!r}")
        if nn:
            lengths = np.linalg.norm(self.normals, axis=1)
            if np.any(np.abs(lengths - 1.0) > 1e-6):
                raise SchemaError("non-unit normal in mesh")


@dataclass
class Material:
    diffuse_rgb: tuple[int, int, int]
    texture: str | None = None


@dataclass
class BuildingModel:
    meshes: list[Mesh] = field(default_factory=list)
    materials: dict[str, Material] = field(default_factory=dict)

    def validate(self):
        for mesh in self.meshes:
            mesh.validate()
            if mesh.material not in self.materials:
                raise SchemaError(f"mesh uses undefined material {mesh.material!r}")


@dataclass(frozen=True)
class FacadeQuad:
    """A window-bearing rectangular facade of a mass, in world space.

    origin is the bottom-left corner seen from outside; u runs along the
    facade width, v straight up. Both axes are unit vectors.
    """

    origin: np.ndarray  # (3,)
    u: np.ndarray  # (3,) horizontal unit axis
    v: np.ndarray  # (3,) vertical unit axis
    width: float
    height: float
    normal: np.ndarray  # (3,) outward unit normal

    def corners(self) -> np.ndarray:
        """4 corners, counter-clockwise from bottom-left (seen from outside)."""
        o = self.origin
        return np.stack([
            o,
            o + self.u * self.width,
            o + self.u * self.width + self.v * self.height,
            o + self.v * self.height,
        ])
