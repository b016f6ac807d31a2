import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from MomentumCheck.errors import InputError
from MomentumCheck.geometry import ConvexCone
from MomentumCheck.lgp import (DiscreteSpace, LgpParams, LgpVerdict, build_quotient,
                               check_lfc, check_local_convexity_data,
                               geodesic_straightness, lgp_exit_code, lgp_verdict,
                               quotient_metric)
from MomentumCheck.lgp.engine import fibers_connected
from MomentumCheck.scenes.spaces import (circle_height_space, generated_space,
                                         half_open_interval_space, segment_space,
                                         square_minus_diamond,
                                         square_minus_diamond_points)

N_CIRCLE = 64


def test_circle_lfc_fails_at_the_extremes():
    s = circle_height_space(N_CIRCLE)
    assert check_lfc(s) == [0, N_CIRCLE // 2]


def test_circle_has_local_convexity_data():
    report = check_local_convexity_data(circle_height_space(N_CIRCLE))
    assert report['ok']
    assert report['containment'] == report['vn'] == report['slo'] == []


def test_circle_fibers_are_split():
    q = build_quotient(circle_height_space(N_CIRCLE))
    assert q.n_classes == N_CIRCLE
    connected, witnesses = fibers_connected(q)
    assert not connected
    assert len(witnesses) == N_CIRCLE // 2 - 1


def test_circle_verdict():
    verdict = lgp_verdict(circle_height_space(N_CIRCLE))
    assert verdict.failed_hypotheses() == ['lfc_ok']
    assert verdict.hypotheses['witnesses']['lfc'] == [0, N_CIRCLE // 2]
    assert not verdict.conclusions['fibers_connected']
    assert verdict.consistent
    assert lgp_exit_code(verdict) == 1
    assert verdict.summary() == "LFC violated at 2 vertices"


def test_circle_quotient_metric():
    s = circle_height_space(N_CIRCLE)
    q = build_quotient(s)
    D = quotient_metric(q)
    for k in range(1, N_CIRCLE // 4):
        assert D[k, N_CIRCLE - k] == pytest.approx(2.0 * (1.0 - s.f[k, 0]), abs=1e-9)
    assert np.allclose(D, D.T)
    assert np.array_equal(quotient_metric(q, 3), D[3])


@pytest.mark.parametrize('make_space', [lambda: circle_height_space(16), lambda: generated_space(0),
                                        lambda: generated_space(1), lambda: generated_space(2),
                                        square_minus_diamond])
def test_quotient_metric_axioms(make_space):
    q = build_quotient(make_space())
    D = quotient_metric(q)
    n = q.n_classes
    off_diagonal = ~np.eye(n, dtype=bool)
    assert np.all(np.diag(D) == 0)
    assert np.all(D[off_diagonal] > 0)
    assert np.allclose(D, D.T)
    assert np.all(D[:, None, :] <= D[:, :, None] + D[None, :, :] + 1e-9)
    V = q.class_values
    assert np.all(np.linalg.norm(V[:, None, :] - V[None, :, :], axis=2) <= D + 1e-9)


@settings(max_examples=20, deadline=None)
@given(st.permutations(list(range(16))))
def test_quotient_follows_relabeling(permutation):
    s = circle_height_space(16)
    relabeled = build_quotient(s.relabeled(permutation)).partition()
    assert relabeled == {frozenset(permutation[v] for v in part)
                         for part in build_quotient(s).partition()}


def test_circle_geodesics_bend():
    q = build_quotient(circle_height_space(N_CIRCLE))
    straight, deviation, length = geodesic_straightness(q, 8, N_CIRCLE - 8)
    assert not straight
    assert deviation > 0.25
    assert length > 0.5


def test_segment_is_consistent_and_straight():
    s = segment_space(11)
    q = build_quotient(s)
    straight, deviation, length = geodesic_straightness(q, 0, 10)
    assert straight
    assert deviation == pytest.approx(0.0, abs=1e-12)
    assert length == pytest.approx(1.0)
    verdict = lgp_verdict(s)
    assert verdict.hypotheses_ok and verdict.conclusions_ok
    assert lgp_exit_code(verdict) == 0


def test_geodesic_across_components():
    s = DiscreteSpace(2, [], [0.0, 1.0])
    with pytest.raises(InputError):
        geodesic_straightness(build_quotient(s), 0, 1)


def test_square_minus_diamond_lfc_at_the_tips():
    points = square_minus_diamond_points()
    s = square_minus_diamond()
    expected = sorted([points.index((0, 3)), points.index((0, -3))])
    assert check_lfc(s) == expected
    assert lgp_exit_code(lgp_verdict(s)) == 1


def test_half_open_interval_fails_vertex_neighborhood():
    s = half_open_interval_space()
    report = check_local_convexity_data(s)
    assert 0 in report['vn']
    assert not report['ok']
    verdict = lgp_verdict(s)
    assert set(verdict.failed_hypotheses()) == {'lcd_ok', 'closed_ok'}
    assert lgp_exit_code(verdict) == 1


def test_generated_spaces_are_consistent():
    for seed in range(20):
        verdict = lgp_verdict(generated_space(seed))
        assert verdict.consistent, (seed, verdict.summary())
        assert lgp_exit_code(verdict) != 4


def test_alarm_exit_code():
    hypotheses = {'lfc_ok': True, 'lcd_ok': True, 'closed_ok': True, 'witnesses': {}}
    conclusions = {'fibers_connected': False, 'open_onto_image': True,
                   'image_convex': True, 'resolution_suspect': False, 'witnesses': {}}
    verdict = LgpVerdict(hypotheses, conclusions)
    assert not verdict.consistent
    assert lgp_exit_code(verdict) == 4
    assert verdict.summary().startswith("hypotheses hold but conclusions fail")
    assert verdict.to_dict()['consistent'] is False


@settings(max_examples=20, deadline=None)
@given(st.permutations(list(range(N_CIRCLE))))
def test_lfc_follows_relabeling(permutation):
    s = circle_height_space(N_CIRCLE).relabeled(permutation)
    assert check_lfc(s) == sorted([permutation[0], permutation[N_CIRCLE // 2]])


def test_zero_length_edges_merge_classes():
    s = DiscreteSpace(4, [(0, 1), (1, 2), (2, 3)], [0.0, 0.0, 1.0, 1.0])
    q = build_quotient(s)
    assert q.partition() == {frozenset([0, 1]), frozenset([2, 3])}
    assert list(q.representatives) == [0, 2]
    assert quotient_metric(q, 0)[1] == pytest.approx(1.0)


def test_single_vertex_space_is_trivially_fine():
    verdict = lgp_verdict(DiscreteSpace(1, [], [[0.0, 0.0]]))
    assert verdict.failed_hypotheses() == []
    for key in ('fibers_connected', 'open_onto_image', 'image_convex'):
        assert verdict.conclusions[key], key
    assert lgp_exit_code(verdict) == 0


def test_missing_cones_are_trivial():
    s = DiscreteSpace(2, [(0, 1)], [0.0, 1.0])
    assert not s.has_cones
    assert s.cone_at(0).dim == 1
    report = check_local_convexity_data(s)
    assert report['containment'] == [0, 1]
    assert not report['ok']


def test_space_validation_and_round_trip():
    with pytest.raises(InputError):
        DiscreteSpace(2, [(0, 0)], [0.0, 1.0])
    with pytest.raises(InputError):
        DiscreteSpace(2, [(0, 2)], [0.0, 1.0])
    with pytest.raises(InputError):
        DiscreteSpace(2, [(0, 1)], [0.0, 1.0], eps=0)
    with pytest.raises(InputError):
        DiscreteSpace(2, [(0, 1)], [0.0, 1.0],
                      cones=[ConvexCone([0.5], [[1.0]]), ConvexCone([1.0], [[1.0]])])
    with pytest.raises(InputError):
        check_local_convexity_data(segment_space(5), hop_radius=0)
    with pytest.raises(InputError):
        LgpParams(hop_radius=0)

    s = circle_height_space(8)
    again = DiscreteSpace.from_dict(s.to_dict())
    assert again.eps == s.eps
    assert np.allclose(again.f, s.f)
    assert check_lfc(again) == check_lfc(s) == [0, 4]


if __name__ == "__main__":
    pytest.main([__file__])
