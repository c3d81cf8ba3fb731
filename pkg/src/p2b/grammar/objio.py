"""Wavefront OBJ/MTL writer and a matching reader.

Serialization is pinned for byte-reproducible output: 6 fixed decimals
for every float, 1-based indices, v/vt/vn/f record order per mesh,
lexicographically ordered materials in the MTL.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from ..errors import P2BError
from .types import BuildingModel, Material, Mesh


def _fmt(x: float) -> str:
    s = f"{x:.6f}"
    return "0.000000" if s == "-0.000000" else s


def export_obj(model: BuildingModel, out_dir: str,
               obj_name: str = "model.obj", mtl_name: str = "model.mtl") -> dict[str, str]:
    """Write model.obj + model.mtl into out_dir; returns the file paths."""
    model.validate()
    os.makedirs(out_dir, exist_ok=True)
    obj_path = os.path.join(out_dir, obj_name)
    mtl_path = os.path.join(out_dir, mtl_name)

    lines = [f"mtllib {mtl_name}"]
    v_off = vt_off = vn_off = 0
    # Vertex pools can be shared between meshes; write each pool once.
    pool_offsets: dict[int, tuple[int, int, int]] = {}
    for mesh in model.meshes:
        key = id(mesh.vertices)
        if key not in pool_offsets:
            for x, y, z in mesh.vertices:
                lines.append(f"v {_fmt(x)} {_fmt(y)} {_fmt(z)}")
            for u, v in mesh.uvs:
                lines.append(f"vt {_fmt(u)} {_fmt(v)}")
            for x, y, z in mesh.normals:
                lines.append(f"vn {_fmt(x)} {_fmt(y)} {_fmt(z)}")
            pool_offsets[key] = (v_off, vt_off, vn_off)
            v_off += len(mesh.vertices)
            vt_off += len(mesh.uvs)
            vn_off += len(mesh.normals)

    for mesh in model.meshes:
        dv, dt, dn = pool_offsets[id(mesh.vertices)]
        lines.append(f"g {mesh.group}")
        lines.append(f"usemtl {mesh.material}")
        for face in mesh.faces:
            corners = " ".join(
                f"{vi + dv + 1}/{ti + dt + 1}/{ni + dn + 1}" for vi, ti, ni in face
            )
            lines.append(f"f {corners}")

    with open(obj_path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")

    mlines = []
    for name in sorted(model.materials):
        mat = model.materials[name]
        r, g, b = (c / 255.0 for c in mat.diffuse_rgb)
        mlines.append(f"newmtl {name}")
        mlines.append(f"Kd {_fmt(r)} {_fmt(g)} {_fmt(b)}")
        if mat.texture:
            mlines.append(f"map_Kd {mat.texture}")
    with open(mtl_path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(mlines) + "\n")

    return {"obj": obj_path, "mtl": mtl_path}


@dataclass
class ParsedObj:
    vertices: np.ndarray
    uvs: np.ndarray
    normals: np.ndarray
    # (group, material) -> list of faces, each a (3, 3) int array of 0-based indices
    groups: dict[tuple[str, str], list[np.ndarray]] = field(default_factory=dict)
    mtllib: str | None = None

    @property
    def face_count(self) -> int:
        return sum(len(f) for f in self.groups.values())


def parse_obj(path: str) -> ParsedObj:
    """Read back the OBJ subset export_obj writes (v/vt/vn, triangle f)."""
    vs: list[list[float]] = []
    ts: list[list[float]] = []
    ns: list[list[float]] = []
    groups: dict[tuple[str, str], list[np.ndarray]] = {}
    group, material, mtllib = "default", "default", None
    with open(path, encoding="ascii") as fh:
        for lineno, raw in enumerate(fh, start=1):
            parts = raw.split()
            if not parts or parts[0] == "#":
                continue
            tag = parts[0]
            if tag == "v":
                vs.append([float(x) for x in parts[1:4]])
            elif tag == "vt":
                ts.append([float(x) for x in parts[1:3]])
            elif tag == "vn":
                ns.append([float(x) for x in parts[1:4]])
            elif tag == "g":
                group = parts[1]
            elif tag == "usemtl":
                material = parts[1]
            elif tag == "mtllib":
                mtllib = parts[1]
            elif tag == "f":
                if len(parts) != 4:
                    raise P2BError(f"{path}:{lineno}: only triangle faces supported")
                face = []
                for corner in parts[1:]:
                    bits = corner.split("/")
                    vi = int(bits[0]) - 1
                    ti = int(bits[1]) - 1 if len(bits) > 1 and bits[1] else 0
                    ni = int(bits[2]) - 1 if len(bits) > 2 and bits[2] else 0
                    face.append((vi, ti, ni))
                groups.setdefault((group, material), []).append(np.asarray(face))
            else:
                raise P2BError(f"{path}:{lineno}: unsupported record {tag!r}")
    return ParsedObj(np.asarray(vs), np.asarray(ts), np.asarray(ns), groups, mtllib)


def parse_mtl(path: str) -> dict[str, Material]:
    materials: dict[str, Material] = {}
    name = None
    with open(path, encoding="ascii") as fh:
        for raw in fh:
            parts = raw.split()
            if not parts or parts[0] == "#":
                continue
            if parts[0] == "newmtl":
                name = parts[1]
                materials[name] = Material((0, 0, 0))
            elif parts[0] == "Kd" and name:
                rgb = tuple(int(round(float(x) * 255)) for x in parts[1:4])
                materials[name] = Material(rgb, materials[name].texture)
            elif parts[0] == "map_Kd" and name:
                materials[name] = Material(materials[name].diffuse_rgb, parts[1])
    return materials
