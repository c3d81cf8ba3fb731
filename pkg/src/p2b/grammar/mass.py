"""Building-mass styles and their triangle-mesh instantiation.

Four styles: box, box-with-setback, L-shape, cylinder. Each style maps a
unit-cube parameter vector to physical dimensions, builds a closed mesh
(base on y=0, centered in x/z), and declares which rectangular facades
carry windows.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import SchemaError, UnknownStyleError
from .types import FacadeQuad, MassParameters, MassStyle, Mesh, ParamSpec

BOX, SETBACK, LSHAPE, CYLINDER = 0, 1, 2, 3

CYLINDER_SEGMENTS = 24

_STYLES = (
    MassStyle(BOX, "box", (
        ParamSpec("width", 4.0, 50.0),
        ParamSpec("depth", 4.0, 50.0),
        ParamSpec("height", 6.0, 80.0),
    )),
    MassStyle(SETBACK, "setback", (
        ParamSpec("width", 4.0, 50.0),
        ParamSpec("depth", 4.0, 50.0),
        ParamSpec("lower_height", 6.0, 60.0),
        ParamSpec("upper_height", 3.0, 40.0),
        ParamSpec("setback_fraction", 0.3, 0.9, ""),
    )),
    MassStyle(LSHAPE, "lshape", (
        ParamSpec("width", 6.0, 50.0),
        ParamSpec("depth", 6.0, 50.0),
        ParamSpec("height", 6.0, 80.0),
        ParamSpec("wing_x_fraction", 0.25, 0.75, ""),
        ParamSpec("wing_z_fraction", 0.25, 0.75, ""),
    )),
    MassStyle(CYLINDER, "cylinder", (
        ParamSpec("radius", 2.0, 25.0),
        ParamSpec("height", 6.0, 80.0),
    )),
)


def mass_styles() -> tuple[MassStyle, ...]:
    return _STYLES


def mass_style(style_id: int) -> MassStyle:
    if not 0 <= style_id < len(_STYLES):
        raise UnknownStyleError(f"unknown mass style id {style_id}")
    return _STYLES[style_id]


def denormalize(style: MassStyle, params: MassParameters) -> np.ndarray:
    """Map unit-cube values to physical values, linearly per schema entry."""
    if params.style_id != style.id:
        raise SchemaError(f"parameters are for style {params.style_id}, not {style.id}")
    if len(params.values_unit) != len(style.param_schema):
        raise SchemaError(
            f"style {style.name!r} expects {len(style.param_schema)} parameters, "
            f"got {len(params.values_unit)}"
        )
    u = np.asarray(params.values_unit, dtype=float)
    lo = np.array([p.lower for p in style.param_schema])
    hi = np.array([p.upper for p in style.param_schema])
    return lo + u * (hi - lo)


class _MassBuilder:
    """Accumulates a shared vertex/normal/uv pool plus wall and roof faces."""

    def __init__(self):
        self.vertices: list[tuple[float, float, float]] = []
        self.normals: list[tuple[float, float, float]] = []
        # One unit quad's worth of uvs, reused by every face
        self.uvs = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]
        self.wall_faces: list[tuple] = []
        self.roof_faces: list[tuple] = []

    def add_vertices(self, pts) -> int:
        base = len(self.vertices)
        self.vertices.extend(tuple(map(float, p)) for p in pts)
        return base

    def add_normal(self, n) -> int:
        v = np.asarray(n, dtype=float)
        v = v / np.linalg.norm(v)
        self.normals.append(tuple(v))
        return len(self.normals) - 1

    def add_quad(self, idx4, normal, roof=False):
        """Two triangles for vertex indices (bl, br, tr, tl), CCW outward."""
        ni = self.add_normal(normal)
        a, b, c, d = idx4
        faces = self.roof_faces if roof else self.wall_faces
        faces.append(((a, 0, ni), (b, 1, ni), (c, 2, ni)))
        faces.append(((a, 0, ni), (c, 2, ni), (d, 3, ni)))

    def add_box(self, x0, x1, y0, y1, z0, z1, roof_top=True):
        base = self.add_vertices([
            (x0, y0, z0), (x1, y0, z0), (x1, y0, z1), (x0, y0, z1),
            (x0, y1, z0), (x1, y1, z0), (x1, y1, z1), (x0, y1, z1),
        ])
        b000, b100, b101, b001, b010, b110, b111, b011 = range(base, base + 8)
        self.add_quad((b001, b101, b111, b011), (0, 0, 1))   # front +z
        self.add_quad((b101, b100, b110, b111), (1, 0, 0))   # right +x
        self.add_quad((b100, b000, b010, b110), (0, 0, -1))  # back -z
        self.add_quad((b000, b001, b011, b010), (-1, 0, 0))  # left -x
        self.add_quad((b011, b111, b110, b010), (0, 1, 0), roof=roof_top)  # top
        self.add_quad((b100, b101, b001, b000), (0, -1, 0))  # bottom, facing down

    def build(self, name: str) -> list[Mesh]:
        vertices = np.asarray(self.vertices, dtype=float)
        normals = np.asarray(self.normals, dtype=float)
        uvs = np.asarray(self.uvs, dtype=float)
        meshes = []
        for group, faces in (("wall", self.wall_faces), ("roof", self.roof_faces)):
            if not faces:
                continue
            material = "wall" if group == "wall" else "roof"
            meshes.append(Mesh(vertices, normals, uvs,
                               np.asarray(faces, dtype=int), group, material))
        return meshes


def _facade(origin, u, v, width, height, normal) -> FacadeQuad:
    return FacadeQuad(
        origin=np.asarray(origin, dtype=float),
        u=np.asarray(u, dtype=float),
        v=np.asarray(v, dtype=float),
        width=float(width),
        height=float(height),
        normal=np.asarray(normal, dtype=float),
    )


def _box_facades(x0, x1, y0, y1, z0, z1) -> list[FacadeQuad]:
    up = (0.0, 1.0, 0.0)
    h = y1 - y0
    # u = up x normal, so corners() winds CCW seen from outside
    return [
        _facade((x0, y0, z1), (1, 0, 0), up, x1 - x0, h, (0, 0, 1)),    # front
        _facade((x1, y0, z1), (0, 0, -1), up, z1 - z0, h, (1, 0, 0)),   # right
        _facade((x1, y0, z0), (-1, 0, 0), up, x1 - x0, h, (0, 0, -1)),  # back
        _facade((x0, y0, z0), (0, 0, 1), up, z1 - z0, h, (-1, 0, 0)),   # left
    ]


def instantiate_mass_physical(style_id: int, phys) -> tuple[list[Mesh], list[FacadeQuad]]:
    """Build meshes and the window-bearing facade list from physical values."""
    phys = np.asarray(phys, dtype=float)
    b = _MassBuilder()
    style = mass_style(style_id)
    if len(phys) != len(style.param_schema):
        raise SchemaError(f"style {style.name!r} expects {len(style.param_schema)} values")

    if style_id == BOX:
        w, d, h = phys
        b.add_box(-w / 2, w / 2, 0.0, h, -d / 2, d / 2)
        facades = _box_facades(-w / 2, w / 2, 0.0, h, -d / 2, d / 2)

    elif style_id == SETBACK:
        w, d, h1, h2, frac = phys
        b.add_box(-w / 2, w / 2, 0.0, h1, -d / 2, d / 2)
        uw, ud = w * frac, d * frac
        b.add_box(-uw / 2, uw / 2, h1, h1 + h2, -ud / 2, ud / 2)
        # Windows only on the lower tier; the upper tier stays plain.
        facades = _box_facades(-w / 2, w / 2, 0.0, h1, -d / 2, d / 2)

    elif style_id == LSHAPE:
        w, d, h, fx, fz = phys
        xa = -w / 2 + fx * w   # inner x edge of the left wing
        zb = d / 2 - fz * d    # inner z edge of the front wing
        b.add_box(-w / 2, xa, 0.0, h, -d / 2, d / 2)  # left wing, full depth
        b.add_box(xa, w / 2, 0.0, h, zb, d / 2)       # front wing, remaining width
        up = (0.0, 1.0, 0.0)
        facades = [
            _facade((-w / 2, 0, d / 2), (1, 0, 0), up, w, h, (0, 0, 1)),        # front, full width
            _facade((w / 2, 0, d / 2), (0, 0, -1), up, fz * d, h, (1, 0, 0)),   # right, front wing
            _facade((xa, 0, -d / 2), (-1, 0, 0), up, fx * w, h, (0, 0, -1)),    # back of left wing
            _facade((-w / 2, 0, -d / 2), (0, 0, 1), up, d, h, (-1, 0, 0)),      # left, full depth
            _facade((w / 2, 0, zb), (-1, 0, 0), up, (1 - fx) * w, h, (0, 0, -1)),  # notch back
            _facade((xa, 0, zb), (0, 0, -1), up, (1 - fz) * d, h, (1, 0, 0)),   # notch side
        ]

    elif style_id == CYLINDER:
        r, h = phys
        n = CYLINDER_SEGMENTS
        ang = 2 * math.pi * np.arange(n) / n
        bottom = [(r * math.cos(a), 0.0, r * math.sin(a)) for a in ang]
        top = [(r * math.cos(a), h, r * math.sin(a)) for a in ang]
        bi = b.add_vertices(bottom)
        ti = b.add_vertices(top)
        cb = b.add_vertices([(0.0, 0.0, 0.0)])
        ct = b.add_vertices([(0.0, h, 0.0)])
        for i in range(n):
            j = (i + 1) % n
            mid = (ang[i] + ang[j]) / 2 if j else (ang[i] + 2 * math.pi) / 2
            outward = (math.cos(mid), 0.0, math.sin(mid))
            # Lateral quad wound so it faces outward (+x at angle 0, CCW seen from outside)
            b.add_quad((bi + j, bi + i, ti + i, ti + j), outward)
            nd = b.add_normal((0, -1, 0))
            b.wall_faces.append(((cb, 0, nd), (bi + i, 1, nd), (bi + j, 2, nd)))
            nu = b.add_normal((0, 1, 0))
            b.roof_faces.append(((ct, 0, nu), (ti + j, 1, nu), (ti + i, 2, nu)))
        facades = []

    else:  # pragma: no cover - mass_style() already raised
        raise UnknownStyleError(f"unknown mass style id {style_id}")

    return b.build(style.name), facades


def instantiate_mass(params: MassParameters) -> list[Mesh]:
    """Unit-cube parameters to a closed mass mesh (wall + roof groups)."""
    style = mass_style(params.style_id)
    meshes, _ = instantiate_mass_physical(style.id, denormalize(style, params))
    return meshes


def mass_facades(style_id: int, phys) -> list[FacadeQuad]:
    _, facades = instantiate_mass_physical(style_id, phys)
    return facades


def merged_vertices(meshes: list[Mesh]) -> np.ndarray:
    """Distinct vertex pools of a mesh list, concatenated (pools may be shared)."""
    seen: dict[int, np.ndarray] = {}
    for m in meshes:
        seen.setdefault(id(m.vertices), m.vertices)
    return np.concatenate(list(seen.values())) if seen else np.zeros((0, 3))
