import os

import numpy as np
import pandas as pd
import pytest

from MomentumCheck.errors import InputError
from MomentumCheck.scenes import (WeylOrbitHull, builtin_scene, horn_interval_experiment,
                                  schur_horn_experiment, toric_polytope_experiment)
from MomentumCheck.scenes.experiments import horn_interval


def test_weyl_orbit_hull():
    hull = WeylOrbitHull([2, 1, 0])
    assert hull.dim == 3 and hull.trace == 3.0
    assert len(hull.hull_vertices) == 6
    assert hull.contains([1.0, 1.0, 1.0])
    assert hull.contains([2.0, 0.0, 1.0])
    assert not hull.contains([2.5, 0.0, 0.5])
    assert not hull.contains([1.0, 1.0, 0.5])
    assert hull.violation([1.0, 1.0, 1.0]) == pytest.approx(0.0, abs=1e-12)
    # the coordinates sum to 2.5, so some coordinate is off by at least 0.5 / 3
    assert hull.violation([1.0, 1.0, 0.5]) >= 0.5 / 3 - 1e-9
    points = np.array([[1.0, 1.0, 1.0], [1.5, 1.0, 0.5], [2.5, 0.0, 0.5], [0.0, 0.0, 3.0]])
    assert hull.contains_many(points).tolist() == [hull.contains(p) for p in points]
    with pytest.raises(InputError):
        hull.contains([1.0, 1.0])


def test_weyl_orbit_hull_sorts_and_dedups():
    hull = WeylOrbitHull([0, 2, 1])
    assert hull.lam.tolist() == [2.0, 1.0, 0.0]
    assert len(WeylOrbitHull([1, 1, 0]).hull_vertices) == 3
    with pytest.raises(InputError):
        WeylOrbitHull([])


def test_schur_horn(tmp_path):
    report = schur_horn_experiment([2, 1, 0], trials=10000, tol=1e-9, seed=7,
                                   out_dir=str(tmp_path))
    assert report.passed
    assert report.trials == 10000
    assert report.details['outside_hull'] == 0
    assert report.details['max_trace_error'] <= 1e-12
    frame = pd.read_csv(os.path.join(str(tmp_path), 'schur_horn_diagonals.tsv'), sep='\t')
    assert len(frame) == 10000
    assert np.allclose(frame[['d0', 'd1', 'd2']].sum(axis=1), 3.0)
    assert report.to_dict()['artifacts'] == ['schur_horn_diagonals.tsv']


def test_toric_polytope(tmp_path):
    sc = builtin_scene('cp2_toric')
    h = 1.0 / 128
    report = toric_polytope_experiment(sc, n_samples=100000, h=h, seed=8, out_dir=str(tmp_path))
    assert report.passed
    assert report.details['hausdorff'] <= 2 * h
    assert report.details['certificate']['verdict'] == 'Convex'
    assert sorted(report.to_dict()['artifacts']) == ['toric_hull.tsv', 'toric_points.tsv']


def test_toric_ball():
    report = toric_polytope_experiment(builtin_scene('c2_ball'), n_samples=100000,
                                       h=1.0 / 64, seed=9)
    assert report.passed
    assert report.details['hausdorff'] <= 2.0 / 64


def test_toric_needs_fixed_points():
    with pytest.raises(InputError):
        toric_polytope_experiment(builtin_scene('prato'), n_samples=1000, seed=1)
    with pytest.raises(InputError):
        toric_polytope_experiment(builtin_scene('cp2_toric'), n_samples=1000)


def test_horn_interval_fill():
    report = horn_interval_experiment([1, 0], [1, 0], trials=40000, seed=10)
    assert report.passed
    assert report.details['interval'] == [1.0, 2.0]
    assert report.details['max_gap'] <= 0.02
    assert report.details['trace_failures'] == 0


def test_horn_interval_bounds():
    report = horn_interval_experiment([3, 1], [2, 0], trials=10000, seed=11)
    assert report.details['bound_failures'] == 0
    assert report.details['trace_failures'] == 0
    lo, hi = report.details['sampled_hull']
    assert 3.0 - 1e-9 <= lo <= hi <= 5.0 + 1e-9
    assert horn_interval([3, 1], [2, 0]) == (3, 5)


def test_horn_rejects_unsorted_input():
    with pytest.raises(InputError):
        horn_interval_experiment([0, 1], [1, 0], trials=10, seed=1)
    with pytest.raises(InputError):
        horn_interval_experiment([1, 0, 0], [1, 0], trials=10, seed=1)
    with pytest.raises(InputError):
        horn_interval_experiment([1, 0], [1, 0], trials=10)


if __name__ == "__main__":
    pytest.main([__file__])
