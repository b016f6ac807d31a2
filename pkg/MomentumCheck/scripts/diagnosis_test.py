import os

import numpy as np
import pandas as pd
import pytest

from MomentumCheck.diagnosis import (DiagnosisParams, OpennessVerdict, Scene, ccf_check,
                                     diagnose, disconnection_test,
                                     prato_properness_check, rasterize_images, sweep)
from MomentumCheck.diagnosis.openness import (CCF_VIOLATED, CLEAN, DISCONNECTION_FOUND,
                                              NOT_LOCALLY_COMPACT)
from MomentumCheck.errors import InputError, SamplerMismatchError, UndecidableError
from MomentumCheck.geometry import GridRegion, is_locally_convex
from MomentumCheck.models.momentum import AffineMomentum, TorusQuadratic
from MomentumCheck.scenes import builtin_scene
from MomentumCheck.util.data_util import make_rng
from MomentumCheck.util.linalg_util import conjugate, haar_unitaries

H = 1.0 / 64


def box_region(width, height):
    cells = [(i, j) for i in range(width) for j in range(height)]
    return GridRegion((0.0, 0.0), 1.0, cells)


def test_prato_is_open_with_a_locally_convex_image():
    sc = builtin_scene('prato')
    verdict = diagnose(sc, DiagnosisParams(h=H, n_samples=200000, seed=1))
    assert verdict.open_onto_image
    assert verdict.reason == CLEAN
    assert verdict.branch == 'connected_fibers'

    image, _, report = rasterize_images(sc, h=H, n_samples=200000, seed=1)
    assert report['regular_dense']
    corner = np.array([0.5, 0.5])
    for cell in is_locally_convex(image):
        # the only reflex corner of the raster is the missing point (1/2, 1/2)
        assert np.linalg.norm(image.center(cell) - corner) <= 6 * H


def test_karshon_lerman_is_not_open():
    sc = builtin_scene('karshon_lerman')
    verdict = diagnose(sc, DiagnosisParams(h=H, n_samples=200000, seed=1))
    assert not verdict.open_onto_image
    assert verdict.reason == DISCONNECTION_FOUND
    center = verdict.witness['center']
    assert abs(center[1]) <= 2 * H
    assert center[0] > 0.2
    assert any(abs(r - 16 * H) < 1e-12 for r in verdict.witness['radii'])
    assert verdict.witness['removed_cells']


def test_c2_standard_is_open(tmp_path):
    sc = builtin_scene('c2_standard')
    dump = os.path.join(str(tmp_path), 'c2_points.tsv')
    params = DiagnosisParams(h=1.0 / 32, n_samples=50000, seed=2, dump_path=dump)
    verdict = diagnose(sc, params)
    assert verdict.reason == CLEAN
    frame = pd.read_csv(dump, sep='\t')
    assert list(frame.columns) == ['s0', 's1', 's2', 's3', 'j0', 'j1', 'regular']
    assert len(frame) == verdict.details['accepted']


@pytest.mark.parametrize("name, seed, reason", [
    ('c2_standard', 2, CLEAN),
    ('karshon_lerman', 1, DISCONNECTION_FOUND),
])
def test_verdict_survives_halving_h(name, seed, reason):
    sc = builtin_scene(name)
    coarse = diagnose(sc, DiagnosisParams(h=1.0 / 32, n_samples=50000, seed=seed))
    fine = diagnose(sc, DiagnosisParams(h=1.0 / 64, n_samples=200000, seed=seed))
    assert coarse.reason == fine.reason == reason
    assert coarse.open_onto_image == fine.open_onto_image


def test_two_sheet_violates_ccf():
    sc = builtin_scene('two_sheet')
    ok, counterexample = ccf_check(sc, seed=3)
    assert not ok
    flags = [c['regular'] for c in counterexample['components']]
    assert True in flags and False in flags

    verdict = diagnose(sc, DiagnosisParams(h=1.0 / 32, n_samples=20000, seed=3))
    assert verdict.reason == CCF_VIOLATED
    assert verdict.branch == 'ccf'


def test_ccf_branch_needs_local_compactness():
    momentum = builtin_scene('two_sheet').momentum
    sc = Scene('two_sheet', momentum, metadata={'fibers_connected': False})
    verdict = diagnose(sc, DiagnosisParams(h=1.0 / 16, n_samples=5000, seed=3))
    assert verdict.reason == NOT_LOCALLY_COMPACT
    assert not verdict.open_onto_image


def test_ccf_without_oracle_is_undecidable():
    projected = AffineMomentum(TorusQuadratic(), [[1.0, 1.0]])
    sc = Scene('projected', projected)
    with pytest.raises(UndecidableError):
        ccf_check(sc)


def test_sampler_mismatch():
    sc = builtin_scene('prato', {'excluded_radius': 1.999})
    with pytest.raises(SamplerMismatchError):
        rasterize_images(sc, h=1.0 / 16, n_samples=20000, seed=4)


def test_properness():
    ok, _ = prato_properness_check(builtin_scene('c2_standard'), [1.0, 1.0], seed=5)
    assert ok
    ok, _ = prato_properness_check(builtin_scene('cylinder'), [1.0], seed=5)
    assert ok
    ok, witness = prato_properness_check(builtin_scene('c2_ball'), [1.0, 0.0], seed=5)
    assert ok and witness is None
    ok, _ = prato_properness_check(builtin_scene('cp2_toric'), [0.0, 1.0], seed=5)
    assert ok

    ok, witness = prato_properness_check(builtin_scene('karshon_lerman'), [1.0, 0.0], seed=5)
    assert not ok
    assert len(witness['min_component']) == len(witness['levels'])
    assert max(witness['component']) <= 1.0

    with pytest.raises(InputError):
        prato_properness_check(builtin_scene('c2_standard'), [1.0], seed=5)
    with pytest.raises(InputError):
        prato_properness_check(builtin_scene('c2_standard'), [0.0, 0.0], seed=5)


def test_sweep():
    sc = builtin_scene('u2_orbit_sum')
    assert np.allclose(sweep(sc, np.diag([1.0, 3.0])), [3.0, 1.0])
    H2 = np.array([[2.0, 1.0j], [-1.0j, 2.0]])
    assert np.allclose(sweep(sc, H2), [3.0, 1.0])
    with pytest.raises(InputError):
        sweep(sc, np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(InputError):
        sweep(builtin_scene('c2_standard'), np.eye(2))


def test_sweep_is_conjugation_invariant():
    sc = builtin_scene('u2_orbit_sum')
    rng = make_rng(7, 'sweep')
    A = np.array([[1.0, 0.5 - 0.25j], [0.5 + 0.25j, -2.0]])
    expected = sweep(sc, A)
    assert expected[0] >= expected[1]
    for U in haar_unitaries(rng, 2, 20):
        B = conjugate(U, A)
        B = 0.5 * (B + B.conj().T)
        assert np.allclose(sweep(sc, B), expected)


def test_disconnection_by_a_slit():
    image = box_region(40, 40)
    slit = {(i, 20) for i in range(10, 40)}
    regular = image.with_cells([c for c in map(tuple, image.cells.tolist()) if c not in slit])
    found, witness = disconnection_test(image, regular)
    assert found
    assert witness['center_cell'][1] == 20
    assert witness['radii'][:2] == [8.0, 16.0]
    assert witness['components']['8'] == {'image': 1, 'regular': 2}


def test_holes_do_not_disconnect():
    image = box_region(40, 40)
    assert disconnection_test(image, image) == (False, None)
    regular = image.with_cells([c for c in map(tuple, image.cells.tolist()) if c != (20, 20)])
    found, witness = disconnection_test(image, regular)
    assert not found and witness is None


def test_verdict_and_params_validation():
    with pytest.raises(ValueError):
        OpennessVerdict(True, DISCONNECTION_FOUND, witness={'center': [0, 0]})
    with pytest.raises(ValueError):
        OpennessVerdict(False, DISCONNECTION_FOUND)
    with pytest.raises(InputError):
        DiagnosisParams(seed=None)
    with pytest.raises(InputError):
        DiagnosisParams(seed=1, h=0)
    with pytest.raises(InputError):
        DiagnosisParams(seed=1, min_radii=4)


def test_scene_round_trip():
    sc = builtin_scene('karshon_lerman')
    again = Scene.from_dict(sc.to_dict())
    assert again.name == sc.name
    assert again.metadata == sc.metadata
    assert np.allclose(again.box[0], sc.box[0])
    with pytest.raises(InputError):
        Scene.from_dict({'name': 'x'})
    with pytest.raises(InputError):
        Scene('x', TorusQuadratic(), metadata={'compact': True})
    with pytest.raises(InputError):
        builtin_scene('no_such_scene')


if __name__ == "__main__":
    pytest.main([__file__])
