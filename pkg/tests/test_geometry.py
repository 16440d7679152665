"""Grid/crossing containers and coordinate transforms."""

import math

import numpy as np
import pytest

from weftcodec import CrossPointSet, InvalidInputError, YarnGrid
from weftcodec.geometry import (
    mirror_crossings_h,
    mirror_crossings_v,
    mirror_grid_h,
    mirror_grid_v,
    rotate_crossings_180,
    window_mean,
)


def test_crosspointset_coerces_and_behaves_like_list():
    pts = CrossPointSet([(1, 2, 1), (3.5, 4.0, 0)])
    assert pts == [(1.0, 2.0, 1), (3.5, 4.0, 0)]
    assert pts.areas is None
    assert isinstance(pts[0][2], int)


def test_crosspointset_areas_must_align():
    CrossPointSet([(1, 1, 0)], areas=[9])
    with pytest.raises(InvalidInputError):
        CrossPointSet([(1, 1, 0)], areas=[9, 4])


def test_yarngrid_requires_strictly_increasing():
    YarnGrid([1.0, 2.0], [5.0, 9.0])
    with pytest.raises(InvalidInputError):
        YarnGrid([2.0, 2.0], [5.0])
    with pytest.raises(InvalidInputError):
        YarnGrid([1.0], [9.0, 5.0])


def test_yarngrid_shape_and_points_order():
    g = YarnGrid([10.0, 30.0, 50.0], [5.0, 25.0])
    assert g.shape == (2, 3)
    assert g.points() == [(10, 5), (30, 5), (50, 5), (10, 25), (30, 25), (50, 25)]


def test_mirror_maps_are_involutions():
    pts = [(3.0, 4.0, 1), (10.5, 2.0, 0)]
    w, h = 20, 15
    assert mirror_crossings_h(mirror_crossings_h(pts, w), w) == pts
    assert mirror_crossings_v(mirror_crossings_v(pts, h), h) == pts
    assert rotate_crossings_180(rotate_crossings_180(pts, w, h), w, h) == pts
    assert mirror_crossings_h(pts, w)[0] == (16.0, 4.0, 1)
    assert mirror_crossings_v(pts, h)[1] == (10.5, 12.0, 0)


def test_mirror_grid_reorders_and_maps():
    g = YarnGrid([2.0, 9.0], [1.0, 4.0])
    m = mirror_grid_h(g, 12)
    assert m.warp_x == [2.0, 9.0]  # 11-9=2, 11-2=9, re-sorted
    assert m.weft_y == g.weft_y
    m2 = mirror_grid_v(g, 10)
    assert m2.weft_y == [5.0, 8.0]


def test_window_mean_integer_center_is_3x3_mean(rng):
    img = rng.random((9, 9))
    got = window_mean(img, 4, 4, radius=1.0)
    assert math.isclose(got, img[3:6, 3:6].mean(), rel_tol=1e-12)


def test_window_mean_clamps_at_borders():
    img = np.arange(9.0).reshape(3, 3)
    # corner window only sees the in-bounds 2x2 block
    assert window_mean(img, 0, 0, radius=1.0) == (0 + 1 + 3 + 4) / 4


def test_window_mean_fractional_center_symmetric_selection(rng):
    img = rng.random((12, 16))
    h, w = img.shape
    for x, y in ((5.5, 6.0), (7.25, 3.5), (10.0, 8.75)):
        a = window_mean(img, x, y, radius=1.0)
        b = window_mean(img[:, ::-1], (w - 1) - x, y, radius=1.0)
        c = window_mean(img[::-1, :], x, (h - 1) - y, radius=1.0)
        assert a == b == c  # bitwise, order-canonical summation


def test_window_mean_outside_image_rejected():
    with pytest.raises(InvalidInputError):
        window_mean(np.zeros((5, 5)), 30.0, 2.0, radius=1.0)
