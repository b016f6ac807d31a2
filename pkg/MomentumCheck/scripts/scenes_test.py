import os

import numpy as np
import pytest

from MomentumCheck.data.loaders import (load_certificate, load_cone, load_input, load_local_model,
                                        load_scene, load_space, save_json)
from MomentumCheck.diagnosis import Scene
from MomentumCheck.errors import DisconnectedSampleGraphError, InputError
from MomentumCheck.geometry import ConvexCone, GridRegion, cone_contains, cone_to_dict, klee_certify
from MomentumCheck.lgp import DiscreteSpace, build_quotient
from MomentumCheck.lgp.engine import LgpVerdict, lgp_exit_code
from MomentumCheck.models import LocalModel, build_momentum
from MomentumCheck.models.momentum import AffineMomentum
import MomentumCheck.scenes.discretize as discretize_module
from MomentumCheck.scenes import (BUILTIN_SCENES, DiscretizationParams, builtin_scene,
                                  discretize_scene, scene_lgp_verdict)
from MomentumCheck.scenes.spaces import segment_space


def test_builtin_names():
    for name in BUILTIN_SCENES:
        assert builtin_scene(name) is not None
    assert isinstance(builtin_scene('segment_space'), DiscreteSpace)
    assert isinstance(builtin_scene('cylinder'), Scene)


def test_composed_momentum():
    m = build_momentum({'compose': ['c2_standard', {'affine': {'matrix': [[1.0, 1.0]],
                                                                'offset': [2.0]}}]})
    assert isinstance(m, AffineMomentum)
    assert m.dim_target == 1
    X = np.array([[1.0, 0.0, 1.0, 0.0]])
    assert m.evaluate(X)[0, 0] == pytest.approx(m.inner.evaluate(X).sum() + 2.0)
    again = build_momentum(m.descriptor())
    assert np.allclose(again.matrix, m.matrix)
    assert np.allclose(again.offset, m.offset)


def test_bad_descriptors():
    for descriptor in (42, {'foo': 1}, {'compose': []}, {'compose': ['c2_standard', 'c2_standard']},
                       {'compose': ['c2_standard', {'affine': {}}]},
                       {'builtin': 'prato', 'params': {'no_such_param': 1}},
                       'no_such_map'):
        with pytest.raises(InputError):
            build_momentum(descriptor)
    with pytest.raises(InputError):
        build_momentum({'compose': ['c2_standard', {'affine': {'matrix': [[1.0, 1.0, 1.0]]}}]})


def test_discretize_cylinder_grid():
    sc = builtin_scene('cylinder')
    m = sc.momentum
    space = discretize_scene(sc, DiscretizationParams(h=1.0 / 64))
    assert space.n_vertices == m.n_theta * (2 * m.n_rows + 1)
    assert space.is_connected()
    assert space.has_cones
    assert space.closed == sc.metadata['closed_map']
    # circles of constant p are the fibers
    assert build_quotient(space).n_classes == 2 * m.n_rows + 1


def test_discretize_needs_a_seed_for_sampled_scenes():
    with pytest.raises(InputError):
        discretize_scene(builtin_scene('c2_standard'))
    with pytest.raises(InputError):
        DiscretizationParams(k=0)


def test_sparse_graph_is_disconnected():
    params = DiscretizationParams(n_samples=200, k=1, seed=1)
    with pytest.raises(DisconnectedSampleGraphError):
        discretize_scene(builtin_scene('c2_standard'), params)


def verdict_of(consistent):
    hypotheses = {'lfc_ok': True, 'lcd_ok': True, 'closed_ok': True, 'witnesses': {}}
    conclusions = {'fibers_connected': True, 'open_onto_image': True,
                   'image_convex': consistent, 'resolution_suspect': False, 'witnesses': {}}
    return LgpVerdict(hypotheses, conclusions)


def test_alarm_reruns_at_half_the_cell_size(monkeypatch):
    seen = []
    verdicts = [verdict_of(False), verdict_of(True)]
    monkeypatch.setattr(discretize_module, 'discretize_scene',
                        lambda sc, params=None: seen.append(params) or segment_space(5))
    monkeypatch.setattr(discretize_module, 'lgp_verdict', lambda s, params=None: verdicts.pop(0))

    params = DiscretizationParams(n_samples=100, h=1.0 / 16, seed=1)
    verdict = scene_lgp_verdict(builtin_scene('c2_standard'), params)
    assert [p.h for p in seen] == [1.0 / 16, 1.0 / 32]
    assert seen[1].n_samples == 200
    assert not verdict.consistent
    assert verdict.rerun.consistent
    assert verdict.conclusions['resolution_suspect']
    assert lgp_exit_code(verdict) == 0
    payload = verdict.to_dict()
    assert payload['rerun']['h'] == 1.0 / 32
    assert payload['rerun']['consistent']
    assert 'finer re-run' in payload['summary']


def test_persistent_alarm_exits_4(monkeypatch):
    monkeypatch.setattr(discretize_module, 'discretize_scene', lambda sc, params=None: segment_space(5))
    monkeypatch.setattr(discretize_module, 'lgp_verdict', lambda s, params=None: verdict_of(False))
    verdict = scene_lgp_verdict(builtin_scene('c2_standard'), DiscretizationParams(seed=1))
    assert not verdict.conclusions['resolution_suspect']
    assert lgp_exit_code(verdict) == 4


def test_consistent_scene_is_not_rerun():
    verdict = scene_lgp_verdict(builtin_scene('cylinder'))
    assert verdict.rerun is None
    assert lgp_exit_code(verdict) == 0


def test_loaders_round_trip(tmp_path):
    d = str(tmp_path)

    cone = ConvexCone(['1/2', 0], [], [[1, 0], [0, 1]])
    path = save_json(os.path.join(d, 'cone.json'), cone_to_dict(cone))
    again = load_cone(path)
    assert again.exact
    assert cone_contains(again, ['1/2', '1/3'], tol=0)
    assert not cone_contains(again, ['1/3', 0], tol=0)

    model = LocalModel([0, 0], 0, [], [[1, 0], [0, 1]])
    assert load_local_model(save_json(os.path.join(d, 'model.json'), model.to_dict())).num_weights == 2

    space = segment_space(5)
    path = save_json(os.path.join(d, 'space.json'), space.to_dict())
    assert load_space(path).n_vertices == 5
    assert isinstance(load_input(path), DiscreteSpace)

    sc = builtin_scene('karshon_lerman')
    path = save_json(os.path.join(d, 'scene.json'), sc.to_dict())
    assert load_scene(path).metadata == sc.metadata
    assert isinstance(load_input(path), Scene)

    region = GridRegion((0.0, 0.0), 1.0, [(0, 0), (1, 0), (0, 1), (1, 1)])
    path = save_json(os.path.join(d, 'region.json'), region.to_dict())
    assert isinstance(load_input(path), GridRegion)
    cert = klee_certify(load_input(path))
    path = save_json(os.path.join(d, 'cert.json'), cert.to_dict())
    assert load_certificate(path).is_convex


def test_loader_errors(tmp_path):
    path = save_json(os.path.join(str(tmp_path), 'other.json'), {'answer': 42})
    with pytest.raises(InputError):
        load_input(path)
    with pytest.raises(InputError):
        load_space(path)
    with pytest.raises(InputError):
        load_cone(os.path.join(str(tmp_path), 'missing.json'))


if __name__ == "__main__":
    pytest.main([__file__])
