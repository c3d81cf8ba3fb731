"""OBJ/MTL serialization: format pinning, round trips, determinism."""

import numpy as np
import pytest

from p2b.grammar import (
    BuildingGrammar,
    FacadeGrammar,
    MassParameters,
    WindowGrammar,
    compose_building,
    export_obj,
    parse_mtl,
    parse_obj,
)


def model_fixture():
    g = BuildingGrammar(
        mass=MassParameters(0, (6 / 46, 16 / 46, 2 / 74)),
        facade=FacadeGrammar(2, floors=2, columns=3, floor_height_m=3.0,
                             window_rel=(0.1, 0.2, 0.6, 0.5),
                             color_rgb=(178, 168, 152)),
        window=WindowGrammar(0, (0.08,)),
    )
    return compose_building(g)


def test_export_files_exist(tmp_path):
    model = model_fixture()
    paths = export_obj(model, str(tmp_path))
    assert paths["obj"].endswith("model.obj")
    assert paths["mtl"].endswith("model.mtl")
    text = open(paths["obj"]).read()
    assert text.startswith("mtllib model.mtl\n")


def test_float_format_six_decimals(tmp_path):
    model = model_fixture()
    paths = export_obj(model, str(tmp_path))
    for line in open(paths["obj"]):
        if line.startswith(("v ", "vn ", "vt ")):
            for tok in line.split()[1:]:
                whole, frac = tok.split(".")
                assert len(frac) == 6, line
    # no negative zero tokens
    assert "-0.000000" not in open(paths["obj"]).read()


def test_mtl_kd_byte_mapping(tmp_path):
    model = model_fixture()
    paths = export_obj(model, str(tmp_path))
    text = open(paths["mtl"]).read()
    # 178/255, 168/255, 152/255 at 6 decimals
    assert "newmtl wall\nKd 0.698039 0.658824 0.596078" in text
    # materials appear in sorted name order
    names = [l.split()[1] for l in text.splitlines() if l.startswith("newmtl")]
    assert names == sorted(names)


def test_roundtrip_geometry(tmp_path):
    model = model_fixture()
    paths = export_obj(model, str(tmp_path))
    parsed = parse_obj(paths["obj"])
    assert parsed.mtllib == "model.mtl"

    n_faces = sum(len(m.faces) for m in model.meshes)
    assert parsed.face_count == n_faces

    # reconstruct every triangle's corner positions from both sides and compare
    exported = []
    for m in model.meshes:
        for f in m.faces:
            exported.append(np.array([m.vertices[f[k, 0]] for k in range(3)]))
    parsed_tris = []
    for faces in parsed.groups.values():
        for f in faces:
            parsed_tris.append(np.array([parsed.vertices[f[k, 0]] for k in range(3)]))
    exported = np.round(np.array(exported), 6)
    got = np.array(parsed_tris)
    key = lambda arr: sorted(map(tuple, arr.reshape(len(arr), -1)))
    assert key(exported) == pytest.approx(key(got))


def test_roundtrip_groups_and_materials(tmp_path):
    model = model_fixture()
    paths = export_obj(model, str(tmp_path))
    parsed = parse_obj(paths["obj"])
    mats = parse_mtl(paths["mtl"])

    assert set(mats) == set(model.materials)
    assert mats["wall"].diffuse_rgb == (178, 168, 152)

    groups = {g for g, _ in parsed.groups}
    assert groups == {"wall", "roof", "window"}
    # windows use the glass material
    for (g, mat), faces in parsed.groups.items():
        if g == "window":
            assert mat == "window_glass"


def test_indices_one_based_and_in_range(tmp_path):
    model = model_fixture()
    paths = export_obj(model, str(tmp_path))
    nv = nt = nn = 0
    for line in open(paths["obj"]):
        if line.startswith("v "):
            nv += 1
        elif line.startswith("vt "):
            nt += 1
        elif line.startswith("vn "):
            nn += 1
        elif line.startswith("f "):
            for tok in line.split()[1:]:
                vi, ti, ni = (int(x) for x in tok.split("/"))
                assert 1 <= vi <= nv
                assert 1 <= ti <= nt
                assert 1 <= ni <= nn


def test_export_deterministic(tmp_path):
    m1 = model_fixture()
    m2 = model_fixture()
    p1 = export_obj(m1, str(tmp_path / "a"))
    p2 = export_obj(m2, str(tmp_path / "b"))
    assert open(p1["obj"], "rb").read() == open(p2["obj"], "rb").read()
    assert open(p1["mtl"], "rb").read() == open(p2["mtl"], "rb").read()
