"""Shape primitives, signed rasterization, and the gasket membership test."""

import math

import numpy as np
import pytest

from sigmaconv import COMPACT, Grid, inverted_triangle_holes, rasterize_scene, \
    shapes, sierpinski_membership
from sigmaconv.shapes import (SQRT3_2, EmptyPrimitiveWarning,
                              ResolutionWarning, _polygon_even_odd,
                              _segment_distance)


def test_segment_distance_hand_values():
    p, q = complex(0, 0), complex(2, 0)
    zs = np.array([1 + 1j, -1 + 0j, 3 + 0j, 0.5 + 0j])
    d = _segment_distance(zs, p, q)
    assert d[0] == pytest.approx(1.0)
    assert d[1] == pytest.approx(1.0)   # beyond the p end
    assert d[2] == pytest.approx(1.0)   # beyond the q end
    assert d[3] == pytest.approx(0.0)


def test_polygon_even_odd_square():
    xs, ys = (0.0, 2.0, 2.0, 0.0), (0.0, 0.0, 2.0, 2.0)
    zs = np.array([1 + 1j, 3 + 1j, -0.5 + 0.5j])
    inside = _polygon_even_odd(zs, xs, ys)
    assert inside.tolist() == [True, False, False]


def test_sierpinski_membership_depth_one():
    # centers of the three corner subtriangles stay, the middle one goes
    keep = [complex(0.25, 0.1), complex(0.75, 0.1), complex(0.5, SQRT3_2 * 0.55)]
    removed_center = complex(0.5, SQRT3_2 * 0.3)
    for z in keep:
        assert sierpinski_membership(np.array([z]), 1)[0]
    assert not sierpinski_membership(np.array([removed_center]), 1)[0]
    # depth 0 is the full triangle
    assert sierpinski_membership(np.array([removed_center]), 0)[0]


def test_inverted_triangle_hole_counts():
    assert len(inverted_triangle_holes(1)) == 1
    assert len(inverted_triangle_holes(2)) == 4
    assert len(inverted_triangle_holes(3)) == 13
    assert len(inverted_triangle_holes(4)) == 40


def test_first_hole_is_the_central_midpoint_triangle():
    (level, (p, q, r)), = inverted_triangle_holes(1)
    assert level == 1
    expect = {complex(0.5, 0.0), complex(0.75, SQRT3_2 / 2),
              complex(0.25, SQRT3_2 / 2)}
    got = {p, q, r}
    for w in expect:
        assert any(abs(w - v) < 1e-12 for v in got)


@pytest.mark.parametrize("depth", [1, 2, 3, 4])
def test_gasket_area_ratio(depth):
    g = Grid.from_box(-0.1, -0.1, 1.1, 1.1, 512, 512)
    m = rasterize_scene([(1, shapes.SierpinskiShape(depth))], g, kind=COMPACT)
    expect = (0.75 ** depth) * (math.sqrt(3) / 4)
    assert m.count() * g.pixel ** 2 == pytest.approx(expect, rel=0.02)


def test_signed_rasterization_subtracts():
    g = Grid.from_box(-2.0, -2.0, 2.0, 2.0, 128, 128)
    ring = rasterize_scene([(1, shapes.Disk(0.0, 0.0, 1.0)),
                            (-1, shapes.Disk(0.0, 0.0, 0.5))], g, kind=COMPACT)
    outer = rasterize_scene([(1, shapes.Disk(0.0, 0.0, 1.0))], g, kind=COMPACT)
    inner = rasterize_scene([(1, shapes.Disk(0.0, 0.0, 0.5))], g, kind=COMPACT)
    assert ring.same_cells(outer.difference(inner))


def test_points_primitive_marks_containing_cells():
    g = Grid.from_box(-1.0, -1.0, 1.0, 1.0, 16, 16)
    z = complex(0.3, -0.4)
    m = rasterize_scene([(1, shapes.Points((z,)))], g, kind=COMPACT)
    assert m.count() == 1
    i, j = g.index_of(z)
    assert m.bits[j, i]


def test_segment_default_halfwidth_follows_pixel():
    g = Grid.from_box(-1.0, -1.0, 1.0, 1.0, 64, 64)
    m = rasterize_scene([(1, shapes.Segment(-0.5, 0.0, 0.5, 0.0))], g,
                        kind=COMPACT)
    assert m.count() > 0
    zs = g.centers()[m.bits]
    assert np.all(np.abs(zs.imag) <= 0.75 * g.pixel + 1e-12)


def test_empty_primitive_warns():
    g = Grid.from_box(-1.0, -1.0, 1.0, 1.0, 16, 16)
    with pytest.warns(EmptyPrimitiveWarning):
        rasterize_scene([(1, shapes.Disk(50.0, 50.0, 0.1))], g, kind=COMPACT)


def test_coarse_gasket_warns():
    g = Grid.from_box(-0.1, -0.1, 1.1, 1.1, 16, 16)  # pixel 0.075 > 0.5^4
    with pytest.warns(ResolutionWarning):
        rasterize_scene([(1, shapes.SierpinskiShape(4))], g, kind=COMPACT)


def test_full_plane_covers_interior():
    g = Grid.from_box(-1.0, -1.0, 1.0, 1.0, 16, 16)
    m = rasterize_scene([(1, shapes.FullPlane())], g, kind=COMPACT)
    assert m.count() == (16 - 2) * (16 - 2)  # frame ring clipped
