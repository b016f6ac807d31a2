from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import MomentumCheck.geometry.klee as klee_module
from MomentumCheck.errors import HypothesisUnavailableError, InputError
from MomentumCheck.geometry import (CONVEX, DISCONNECTED, NOT_LOCALLY_CONVEX,
                                    ConvexCone, GridRegion, ccw_hull_2d, chord_cells,
                                    certificate_from_dict, cone_contains,
                                    cone_contains_many, convex_hull, is_locally_convex,
                                    klee_certify, polygon_distance, polygonal_connect,
                                    rasterize_convex_polygon, rasterize_points,
                                    region_components, segment_in_region)
from MomentumCheck.util.data_util import make_rng

H = 1.0 / 16


def full_box(width, height, h=1.0):
    cells = [(i, j) for i in range(width) for j in range(height)]
    return GridRegion((0.0, 0.0), h, cells)


def l_shape(width, a, b, h=H):
    """Square of width cells minus the quadrant i >= a, j >= b"""
    cells = [(i, j) for i in range(width) for j in range(width) if i < a or j < b]
    return GridRegion((0.0, 0.0), h, cells, shape=(width, width))


def random_hull_raster(rng):
    k = int(rng.integers(3, 9))
    points = rng.uniform(0.1, 0.9, size=(k, 2))
    polygon = ccw_hull_2d(points)
    return rasterize_convex_polygon(polygon, (0.0, 0.0), H, (16, 16))


# Cones

quadrant = ConvexCone([0, 0], [], [[1, 0], [0, 1]])


def test_exact_cone_membership():
    assert quadrant.exact
    assert cone_contains(quadrant, ['1/2', '1/3'], tol=0)
    assert cone_contains(quadrant, [0, 0], tol=0)
    assert not cone_contains(quadrant, [Fraction(-1, 10**9), 1], tol=0)


def test_float_cone_membership():
    cone = quadrant.as_float()
    assert not cone.exact
    assert cone_contains(cone, [0.5, 0.25])
    assert not cone_contains(cone, [-0.1, 0.5])
    with pytest.raises(InputError):
        cone_contains(cone, [0.5, 0.5], tol=0)


def test_cone_with_lineality():
    cone = ConvexCone([0, 0, 0], [[0, 0, 1]], [[1, 0, 0], [0, 1, 0]])
    assert cone_contains(cone, [1, 2, -5])
    assert not cone_contains(cone, [1, -2, 0])
    assert cone_contains(cone, [0.5, 0.5, 100.0])


def test_cone_errors():
    with pytest.raises(InputError):
        ConvexCone([0, 0], [], [[0, 0]])
    with pytest.raises(InputError):
        ConvexCone([0, 0], [[1, 0], [2, 0]], [])
    with pytest.raises(InputError):
        cone_contains(quadrant, [1, 2, 3])


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.floats(-3, 3), st.floats(-3, 3)), min_size=1, max_size=40))
def test_bulk_membership_agrees(points):
    cone = ConvexCone([0.5, -0.5], [], [[1.0, 0.0], [1.0, 2.0], [-1.0, 3.0]])
    P = np.asarray(points, dtype=float)
    bulk = cone_contains_many(cone, P)
    for p, inside in zip(P, bulk):
        d = p - np.array([0.5, -0.5])
        # skip points within rounding distance of a boundary ray
        margins = [abs(d[0] * g[1] - d[1] * g[0]) for g in ([1.0, 0.0], [-1.0, 3.0])]
        if min(margins) < 1e-6:
            continue
        assert cone_contains(cone, p) == inside


# Hulls

def test_square_hull_is_exact_and_sorted():
    points = [[0, 0], [2, 0], [2, 2], [0, 2], [1, 1], ['1/2', '3/2']]
    hull = convex_hull(points)
    assert [tuple(v) for v in hull] == [(0, 0), (0, 2), (2, 0), (2, 2)]
    assert all(isinstance(v[0], Fraction) for v in hull)


def test_collinear_hull():
    hull = convex_hull([[0, 0], [1, 1], [3, 3], [2, 2]])
    assert [tuple(v) for v in hull] == [(0, 0), (3, 3)]


def test_cube_hull():
    corners = [[x, y, z] for x in (0.0, 1.0) for y in (0.0, 1.0) for z in (0.0, 1.0)]
    hull = convex_hull(corners + [[0.5, 0.5, 0.5], [0.2, 0.7, 0.1]])
    assert len(hull) == 8


def test_hull_errors():
    with pytest.raises(InputError):
        convex_hull([])
    with pytest.raises(InputError):
        convex_hull([[0, 0, 0, 0, 0]])
    with pytest.raises(InputError):
        convex_hull([[0, 0], [1, 0, 0]])


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(-20, 20), st.integers(-20, 20)), min_size=3, max_size=30))
def test_hull_contains_input_and_is_minimal(points):
    hull = convex_hull([list(p) for p in points])
    assert {tuple(v) for v in hull} <= set(points)
    polygon = ccw_hull_2d(np.array([[float(v[0]), float(v[1])] for v in hull]))
    assert polygon_distance(np.asarray(points, dtype=float), polygon).max() <= 1e-9
    if len(hull) > 1:
        for i, v in enumerate(hull):
            others = [hull[j] for j in range(len(hull)) if j != i]
            rest = ccw_hull_2d(np.array([[float(w[0]), float(w[1])] for w in others]))
            assert polygon_distance(np.array([[float(v[0]), float(v[1])]]), rest)[0] > 0


# Grid regions

def test_chord_cells():
    assert chord_cells([0, 0], [2, 0]) == [((0, 0),), ((1, 0),), ((2, 0),)]
    assert chord_cells([0, 0], [1, 1]) == [((0, 0),), ((1, 1),)]
    assert chord_cells([0, 0.5], [2, 0.5]) == [((0, 0), (0, 1)), ((1, 0), (1, 1)), ((2, 0), (2, 1))]
    assert chord_cells([0.5], [0.5]) == [((0,), (1,))]


def test_segment_in_region():
    r = l_shape(12, 4, 4, h=1.0)
    assert segment_in_region(r, [0.5, 0.5], [11.5, 0.5])
    assert segment_in_region(r, [0.5, 11.5], [0.5, 0.5])
    assert not segment_in_region(r, [2.5, 11.5], [11.5, 2.5])
    with pytest.raises(InputError):
        segment_in_region(r, [-5.0, 0.5], [0.5, 0.5])


def test_segment_across_a_one_cell_gap():
    gap = GridRegion((0.0, 0.0), 1.0, [(0, 0), (2, 0)], shape=(3, 1))
    assert not segment_in_region(gap, (0.5, 0.5), (2.5, 0.5))
    assert not segment_in_region(gap, (0.5, 0.3), (2.5, 0.7))
    assert segment_in_region(gap, (0.2, 0.5), (0.8, 0.5))
    filled = gap.with_cells([(0, 0), (1, 0), (2, 0)])
    assert segment_in_region(filled, (0.5, 0.5), (2.5, 0.5))


def test_local_convexity_radius_floor():
    r = full_box(5, 5)
    assert is_locally_convex(r) == []
    assert is_locally_convex(r.with_cells([(0, 0)])) == []
    with pytest.raises(InputError):
        is_locally_convex(r, radius=1.5)


def test_region_components_order():
    r = GridRegion((0.0, 0.0), 1.0, [(5, 5), (5, 6), (0, 0), (1, 0), (2, 2)])
    components = region_components(r)
    assert [tuple(c.cells[0]) for c in components] == [(0, 0), (2, 2), (5, 5)]
    assert [len(c) for c in components] == [2, 1, 2]
    # corner contact does not connect
    diagonal = GridRegion((0.0, 0.0), 1.0, [(0, 0), (1, 1)])
    assert len(region_components(diagonal)) == 2


def test_polygonal_connect():
    r = l_shape(12, 4, 4, h=1.0)
    x, y = np.array([0.5, 11.5]), np.array([11.5, 0.5])
    path = polygonal_connect(r, x, y)
    assert np.allclose(path[0], x) and np.allclose(path[-1], y)
    assert len(path) >= 3
    for p, q in zip(path[:-1], path[1:]):
        assert segment_in_region(r, p, q)

    split = GridRegion((0.0, 0.0), 1.0, [(0, 0), (0, 1), (3, 0), (3, 1)])
    assert polygonal_connect(split, [0.5, 0.5], [3.5, 1.5]) is None
    with pytest.raises(InputError):
        polygonal_connect(split, [1.5, 0.5], [3.5, 1.5])


def test_rasterize_points_and_round_trip():
    r = rasterize_points([[0.1, 0.1], [0.15, 0.12], [0.9, 0.4], [5.0, 5.0]],
                         (0.0, 0.0), 0.25, shape=(4, 4))
    assert sorted(tuple(c) for c in r.cells) == [(0, 0), (3, 1)]
    again = GridRegion.from_dict(r.to_dict())
    assert again.shape == (4, 4)
    assert np.array_equal(again.cells, r.cells)
    with pytest.raises(InputError):
        GridRegion.from_dict({'origin': [0, 0], 'cells': []})


# Convexity certificates

def test_rasterized_hulls_are_convex():
    for trial in range(200):
        r = random_hull_raster(make_rng(11, 'hull_raster', trial))
        cert = klee_certify(r)
        assert cert.verdict == CONVEX, trial
        assert cert.hull_vertices


def test_l_shapes_are_not_locally_convex():
    rng = make_rng(12, 'l_shape')
    for trial in range(200):
        width = int(rng.integers(12, 25))
        a = int(rng.integers(4, width - 3))
        b = int(rng.integers(4, width - 3))
        r = l_shape(width, a, b)
        cert = klee_certify(r)
        assert cert.verdict == NOT_LOCALLY_CONVEX, trial
        corner = np.array([a, b]) * H
        for cell in cert.witnesses:
            assert np.linalg.norm(r.center(cell) - corner) <= 5 * H


def test_disconnected_and_unavailable():
    r = GridRegion((0.0, 0.0), 1.0, [(0, 0), (0, 1), (4, 0)])
    cert = klee_certify(r)
    assert cert.verdict == DISCONNECTED
    assert cert.witnesses == [(0, 0), (4, 0)]
    assert not cert.is_convex

    with pytest.raises(HypothesisUnavailableError):
        klee_certify(r.with_cells(r.cells, closed=False))
    with pytest.raises(InputError):
        klee_certify(r.with_cells([]))


def test_certificate_round_trip():
    cert = klee_certify(full_box(4, 3))
    assert cert.is_convex
    assert cert.oracle_missing == []
    again = certificate_from_dict(cert.to_dict())
    assert again.verdict == CONVEX
    assert len(again.hull_vertices) == 4


def test_one_cell_slot_is_not_convex():
    slotted = [(i, j) for i in range(9) for j in range(9) if not (i == 4 and j >= 2)]
    r = GridRegion((0.0, 0.0), 1.0, slotted)
    assert len(region_components(r)) == 1
    cert = klee_certify(r)
    assert cert.verdict == NOT_LOCALLY_CONVEX
    assert (3, 5) in cert.witnesses
    assert not segment_in_region(r, (3.5, 6.5), (5.5, 6.5))


def test_failing_hull_check_downgrades(monkeypatch):
    monkeypatch.setattr(klee_module, 'is_locally_convex', lambda r, radius=None: [])
    r = l_shape(12, 6, 6, h=1.0)
    cert = klee_certify(r)
    assert cert.verdict == NOT_LOCALLY_CONVEX
    assert cert.oracle_checked
    assert cert.oracle_missing
    assert cert.witnesses == cert.oracle_missing
    assert all(i >= 6 and j >= 6 for i, j in cert.witnesses)


def test_convex_certificates_pass_random_pairs():
    rng = make_rng(13, 'pairs')
    regions = [full_box(7, 4)] + [random_hull_raster(make_rng(13, 'hull_raster', t)) for t in range(19)]
    checked = 0
    for r in regions:
        assert klee_certify(r).is_convex
        for _ in range(50):
            i, j = rng.integers(0, len(r), size=2)
            assert segment_in_region(r, r.center(r.cells[i]), r.center(r.cells[j]))
            checked += 1
    assert checked == 1000


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 31 - 1))
def test_random_hull_raster_property(seed):
    r = random_hull_raster(make_rng(seed, 'hull_raster'))
    assert len(region_components(r)) == 1
    assert is_locally_convex(r) == []


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 31 - 1))
def test_locally_convex_regions_are_polygonally_connected(seed):
    rng = make_rng(seed, 'kakutani')
    r = random_hull_raster(rng)
    assert is_locally_convex(r) == []
    i, j = rng.integers(0, len(r), size=2)
    x = r.center(r.cells[i]) + rng.uniform(-0.49, 0.49, size=2) * r.h
    y = r.center(r.cells[j]) + rng.uniform(-0.49, 0.49, size=2) * r.h
    path = polygonal_connect(r, x, y)
    assert path is not None
    for p, q in zip(path[:-1], path[1:]):
        assert segment_in_region(r, p, q)


if __name__ == "__main__":
    pytest.main([__file__])
