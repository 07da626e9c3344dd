import math

import numpy as np
import pytest

from sspp.errors import InvalidDiscretizationError, InvalidParameterError
from sspp.geometry import CoverageRaster, Window, default_cell_size, distance, union_disc_area


def test_distance_345():
    assert distance((0, 0), (3, 4)) == 5.0


def test_distance_identity():
    assert distance((1, 1), (1, 1)) == 0.0


def test_distance_direct_arithmetic():
    # independent oracle: plain coordinate arithmetic
    expected = math.sqrt(0.30**2 + 0.42**2)
    assert distance((0.90, 0.50), (0.60, 0.92)) == pytest.approx(expected, rel=1e-15)
    assert expected == pytest.approx(0.5162, abs=1e-4)


def test_distance_symmetric():
    rng = np.random.default_rng(7)
    for _ in range(20):
        a, b = rng.random(2), rng.random(2)
        assert distance(a, b) == distance(b, a)
        assert distance(a, b) >= 0


def test_raster_dimensions_unit_square():
    r = CoverageRaster(Window(0, 0, 1, 1), 0.01)
    assert r.shape == (100, 100)
    assert r.covered_area() == 0.0
    assert r.covered_count == 0


def test_raster_dimensions_forest_plot():
    r = CoverageRaster(Window(0, 0, 25, 25), 0.125)
    assert r.shape == (200, 200)


def test_raster_oversized_cell_rejected():
    with pytest.raises(InvalidDiscretizationError):
        CoverageRaster(Window(0, 0, 1, 1), 2.0)
    with pytest.raises(InvalidDiscretizationError):
        CoverageRaster(Window(0, 0, 1, 1), 0.0)
    with pytest.raises(InvalidDiscretizationError):
        CoverageRaster(Window(0, 0, 1, 1), -0.1)


def test_cell_weights_sum_to_window_area():
    # clipped boundary cells: total cell area is exactly |W|
    r = CoverageRaster(Window(0, 0, 1.03, 2.07), 0.1)
    total = float((r.wy[:, None] * r.wx[None, :]).sum())
    assert total == pytest.approx(1.03 * 2.07, rel=1e-12)


def test_add_disc_interior_area():
    r = CoverageRaster(Window(0, 0, 25, 25), 0.125)
    delta = r.add_disc((12, 12), 2.0)
    assert delta == pytest.approx(math.pi * 4.0, rel=0.02)
    assert r.covered_area() == delta


def test_add_disc_idempotent():
    r = CoverageRaster(Window(0, 0, 25, 25), 0.125)
    first = r.add_disc((5, 5), 1.5)
    assert first > 0
    assert r.add_disc((5, 5), 1.5) == 0.0


def test_add_disc_nonpositive_radius():
    r = CoverageRaster(Window(0, 0, 1, 1), 0.01)
    with pytest.raises(InvalidParameterError):
        r.add_disc((0.5, 0.5), 0.0)


def test_add_disc_center_outside_window():
    r = CoverageRaster(Window(0, 0, 1, 1), 0.005)
    delta = r.add_disc((-0.5, 0.5), 0.6)
    # only the in-window sliver counts; circular segment area oracle
    d = 0.5  # distance from center to the window edge
    rad = 0.6
    segment = rad**2 * math.acos(d / rad) - d * math.sqrt(rad**2 - d**2)
    assert delta == pytest.approx(segment, rel=0.02)


def test_two_disc_union_monte_carlo_oracle():
    window = Window(-2, -2, 3, 3)
    radius = 0.6
    centers = [(0.0, 0.0), (1.0, 0.0)]
    area = union_disc_area(centers, radius, window)

    rng = np.random.default_rng(123456)
    darts = rng.random((1_000_000, 2)) * 5.0 - 2.0
    inside = np.zeros(len(darts), dtype=bool)
    for cx, cy in centers:
        inside |= (darts[:, 0] - cx) ** 2 + (darts[:, 1] - cy) ** 2 <= radius**2
    mc_area = 25.0 * inside.mean()
    assert area == pytest.approx(mc_area, abs=0.04)


def test_union_no_points():
    assert union_disc_area([], 0.5, Window(0, 0, 1, 1)) == 0.0


def test_union_disjoint_discs_additive():
    window = Window(0, 0, 25, 25)
    centers = [(5, 5), (12, 5), (19, 5), (5, 15), (12, 15)]
    area = union_disc_area(centers, 1.0, window, cell_size=0.02)
    assert area == pytest.approx(5 * math.pi, rel=0.02)


def test_union_permutation_invariant():
    rng = np.random.default_rng(3)
    pts = rng.random((12, 2)) * 10
    window = Window(0, 0, 10, 10)
    base = union_disc_area(pts, 1.2, window)
    for _ in range(3):
        perm = rng.permutation(len(pts))
        assert union_disc_area(pts[perm], 1.2, window) == pytest.approx(base, rel=1e-9)


def test_covered_area_monotone_and_bounded():
    window = Window(0, 0, 5, 5)
    raster = CoverageRaster(window, 0.025)
    rng = np.random.default_rng(11)
    last = 0.0
    for _ in range(40):
        raster.add_disc(rng.random(2) * 5, 0.8)
        assert raster.covered_area() >= last
        last = raster.covered_area()
    assert last <= window.area() + 1e-12


def test_single_disc_convergence_at_r_over_50():
    radius = 0.7
    window = Window(0, 0, 10, 10)
    area = union_disc_area([(5, 5)], radius, window, cell_size=radius / 50)
    assert abs(area - math.pi * radius**2) / (math.pi * radius**2) < 0.01


def test_default_cell_size():
    assert default_cell_size(Window(0, 0, 25, 25)) == pytest.approx(0.125)
    assert default_cell_size(Window(0, 0, 30, 10)) == pytest.approx(0.05)
