from fractions import Fraction

import numpy as np
import pytest

from MomentumCheck.errors import EmptyFiberError, InputError
from MomentumCheck.geometry import ConvexCone, cone_contains, cone_contains_many
from MomentumCheck.models import (LocalModel, ModelSample, ModelSampler, build_momentum,
                                  check_open_onto_cone, check_vertex_neighborhood,
                                  local_cone, local_fiber_components,
                                  normal_form_momentum)
from MomentumCheck.models.local_model import model_momenta
from MomentumCheck.util.data_util import make_rng


def c2_model():
    return LocalModel([0, 0], 0, [], [[1, 0], [0, 1]])


def test_normal_form_is_exact():
    m = c2_model()
    value = normal_form_momentum(m, ModelSample(norms_sq=['1/2', '1/3']))
    assert list(value) == [Fraction(1, 4), Fraction(1, 6)]

    m = LocalModel([1, 2], 1, [[0, 1]], [[1, 0]])
    value = normal_form_momentum(m, ModelSample(beta=[2], norms_sq=[4]))
    assert list(value) == [3, 4]


def test_model_validation():
    with pytest.raises(InputError):
        LocalModel([0, 0], 0, [], [[0, 0]])
    with pytest.raises(InputError):
        LocalModel([0, 0], 1, [], [])
    with pytest.raises(InputError):
        LocalModel([0, 0], 1, [[1, 0]], [[1, 0], [0, 1]])
    with pytest.raises(InputError):
        ModelSample(norms_sq=[-1])
    with pytest.raises(InputError):
        normal_form_momentum(c2_model(), ModelSample(norms_sq=[1]))
    with pytest.raises(InputError):
        LocalModel.from_dict({'dim_t1': 0})


def test_model_round_trip():
    m = LocalModel(['1/2', 0], 1, [[0, 1]], [[1, 0]])
    again = LocalModel.from_dict(m.to_dict())
    assert again.exact
    assert list(again.base) == [Fraction(1, 2), 0]
    assert again.dim_t1 == 1 and again.num_weights == 1


def test_c2_values_lie_in_the_cone():
    m = c2_model()
    cone = local_cone(m)
    assert cone.exact
    rng = make_rng(6, 'cone_formula')
    numerators = rng.integers(0, 10 ** 6, size=(100000, 2))
    for a, b in numerators:
        value = normal_form_momentum(m, ModelSample(norms_sq=[Fraction(int(a), 1000),
                                                              Fraction(int(b), 1000)]))
        assert cone_contains(cone, value, tol=0)


def test_float_values_lie_in_the_cone():
    m = build_momentum('c2_standard').local_model(np.zeros(4))
    rng = make_rng(6, 'cone_formula_float')
    betas, norms = ModelSampler(m).draw(rng, 100000)
    values = model_momenta(m, betas, norms)
    expected = ConvexCone([0.0, 0.0], [], [[1.0, 0.0], [0.0, 1.0]])
    assert np.all(cone_contains_many(expected, values))


def test_vertex_neighborhood():
    m = c2_model()
    ok, report = check_vertex_neighborhood(m, radius=0.1, n_samples=100000, seed=3)
    assert ok
    assert report['covered'] == report['total'] > 0

    punctured = ModelSampler(m).punctured(0.05)
    ok, report = check_vertex_neighborhood(m, radius=0.1, n_samples=100000, seed=3,
                                           sampler=punctured)
    assert not ok
    assert report['uncovered']

    with pytest.raises(InputError):
        check_vertex_neighborhood(m, n_samples=10)


def test_open_onto_cone():
    m = c2_model()
    ok, witness = check_open_onto_cone(m, seed=4)
    assert ok and witness is None

    pinned = ModelSampler(m).constrained(0)
    ok, witness = check_open_onto_cone(m, seed=4, sampler=pinned)
    assert not ok
    assert witness['uncovered_count'] > 0


def test_mixed_model_is_open():
    # one free direction along x, one weight along y
    m = LocalModel([0.0, 0.0], 1, [[1.0, 0.0]], [[0.0, 1.0]])
    ok, _ = check_vertex_neighborhood(m, n_samples=20000, seed=5)
    assert ok
    ok, _ = check_open_onto_cone(m, seed=5)
    assert ok


def test_fiber_components():
    m = c2_model()
    assert local_fiber_components(m, [0.5, 0.5], seed=2) == 1
    assert local_fiber_components(m, [0, 0], seed=2) == 1
    with pytest.raises(EmptyFiberError):
        local_fiber_components(m, [-1, 0], seed=2)

    m = LocalModel([0.0, 0.0], 1, [[1.0, 0.0]], [[0.0, 1.0], [0.0, 2.0]])
    assert local_fiber_components(m, [0.3, 0.4], seed=2) == 1


if __name__ == "__main__":
    pytest.main([__file__])
