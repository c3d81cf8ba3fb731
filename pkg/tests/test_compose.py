"""Facade subdivision and full building composition."""

import numpy as np
import pytest

from p2b.errors import GeometryError, UnknownStyleError
from p2b.grammar import (
    BuildingGrammar,
    FacadeGrammar,
    FacadeQuad,
    MassParameters,
    WindowGrammar,
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


def make_quad(width=10.0, height=4.0):
    return FacadeQuad(
        origin=np.array([0.0, 0.0, 0.0]),
        u=np.array([1.0, 0.0, 0.0]),
        v=np.array([0.0, 1.0, 0.0]),
        width=width,
        height=height,
        normal=np.array([0.0, 0.0, 1.0]),
    )


def test_style_catalogs():
    assert len(facade_styles()) == 4
    assert len(window_styles()) == 4
    with pytest.raises(UnknownStyleError):
        facade_style(4)
    with pytest.raises(UnknownStyleError):
        window_style(9)


def test_window_tiles_grid():
    quad = make_quad(10.0, 4.0)
    tiles = window_tiles(quad, floors=1, columns=2, floor_height=4.0)
    assert len(tiles) == 2
    (u0, v0, u1, v1) = tiles[0]
    assert (u0, v0, u1, v1) == pytest.approx((0.0, 0.0, 5.0, 4.0))
    assert tiles[1] == pytest.approx((5.0, 0.0, 10.0, 4.0))


def test_window_tiles_bottom_up_with_parapet():
    quad = make_quad(10.0, 10.0)
    tiles = window_tiles(quad, floors=3, columns=1, floor_height=3.0)
    assert len(tiles) == 3
    # rows fill from the bottom; the 1m remainder is a parapet at the top
    assert [t[1] for t in tiles] == pytest.approx([0.0, 3.0, 6.0])
    assert [t[3] for t in tiles] == pytest.approx([3.0, 6.0, 9.0])


def test_window_tiles_overflow_raises():
    quad = make_quad(10.0, 4.0)
    with pytest.raises(GeometryError):
        window_tiles(quad, floors=2, columns=1, floor_height=3.0)


def test_window_box_in_tile_reference():
    # 10m x 4m tile, rel box (left=.1, top=.2, width=.6, height=.6):
    # x in [1, 7]; the top sits 0.8 below the tile top, so v in [0.8, 3.2]
    tile = (0.0, 0.0, 10.0, 4.0)
    u0, v0, u1, v1 = window_box_in_tile(tile, (0.1, 0.2, 0.6, 0.6))
    assert (u0, u1) == pytest.approx((1.0, 7.0))
    assert (v0, v1) == pytest.approx((0.8, 3.2))


def test_clamp_shape_params():
    st = window_style(0)
    vals = clamp_shape_params(st, (0.9,))
    lo, hi = st.frame_bounds
    assert vals == (hi,)
    assert clamp_shape_params(st, (0.0,)) == (lo,)
    mid = (lo + hi) / 2
    assert clamp_shape_params(st, (mid,)) == pytest.approx((mid,))


def _grammar(floors=2, columns=3, mass_unit=(6 / 46, 16 / 46, 2 / 74),
             window_style_id=0):
    return BuildingGrammar(
        mass=MassParameters(0, mass_unit),
        facade=FacadeGrammar(2, floors=floors, columns=columns,
                             floor_height_m=3.0,
                             window_rel=(0.1, 0.2, 0.6, 0.5),
                             color_rgb=(178, 168, 152)),
        window=WindowGrammar(window_style_id, (0.08,)),
    )


def test_compose_window_count():
    # box 10 x 20 x 8 has 4 facades; 2 floors x 3 columns each
    model = compose_building(_grammar())
    assert window_mesh_count(model) == 4 * 2 * 3
    model.validate()


def test_compose_materials():
    model = compose_building(_grammar())
    assert set(model.materials) == {"wall", "roof", "window_glass", "window_frame"}
    assert model.materials["wall"].diffuse_rgb == (178, 168, 152)


def test_compose_floors_scale_count():
    m1 = compose_building(_grammar(floors=1, columns=4))
    m2 = compose_building(_grammar(floors=2, columns=4))
    assert window_mesh_count(m2) == 2 * window_mesh_count(m1)


def test_compose_window_meshes_inside_facades():
    model = compose_building(_grammar())
    # glass panes sit inset from the wall plane, inside the footprint AABB
    glass = [m for m in model.meshes if m.material == "window_glass"]
    assert glass
    for m in glass:
        v = m.vertices
        assert v[:, 0].min() >= -5.0 - 1e-9 and v[:, 0].max() <= 5.0 + 1e-9
        assert v[:, 2].min() >= -10.0 - 1e-9 and v[:, 2].max() <= 10.0 + 1e-9
        assert v[:, 1].min() >= 0.0 and v[:, 1].max() <= 8.0 + 1e-9


def test_compose_pane_grids_differ_by_style():
    # style 1 splits each window into a 2x2 pane grid, so 4x the glass faces
    m_plain = compose_building(_grammar(window_style_id=0))
    m_quad = compose_building(_grammar(window_style_id=1))
    def glass_faces(model):
        return sum(len(m.faces) for m in model.meshes if m.material == "window_glass")
    assert glass_faces(m_quad) == 4 * glass_faces(m_plain)


def test_compose_cylinder_has_no_windows():
    g = BuildingGrammar(
        mass=MassParameters(3, (0.5, 0.5)),
        facade=FacadeGrammar(0, floors=3, columns=2, floor_height_m=3.0,
                             window_rel=(0.1, 0.1, 0.8, 0.8),
                             color_rgb=(200, 200, 200)),
        window=WindowGrammar(0, (0.08,)),
    )
    model = compose_building(g)
    assert window_mesh_count(model) == 0
    assert set(model.materials) == {"wall", "roof"}


def test_compose_rejects_overflowing_floors():
    # 2 floors at 3m won't fit an 8m-tall... they do; 3 floors won't
    g = _grammar(floors=3)
    with pytest.raises(GeometryError):
        compose_building(g)


def test_compose_rejects_unknown_styles():
    g = _grammar()
    bad = BuildingGrammar(g.mass, FacadeGrammar(7, 2, 3, 3.0,
                                                (0.1, 0.2, 0.6, 0.5),
                                                (178, 168, 152)), g.window)
    with pytest.raises(UnknownStyleError):
        compose_building(bad)
