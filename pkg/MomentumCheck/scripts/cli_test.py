import io
import json
import os

import pytest

from MomentumCheck.data.loaders import save_json
from MomentumCheck.errors import InputError
from MomentumCheck.geometry import GridRegion
from MomentumCheck.scripts.mck import DISPATCH, RunConfig, main, parse_number, parse_vector


def run(argv):
    stream = io.StringIO()
    code = main(argv, stream)
    return code, stream.getvalue()


def region_file(tmp_path, cells, closed=True):
    path = os.path.join(str(tmp_path), 'region.json')
    save_json(path, GridRegion((0.0, 0.0), 1.0, cells).with_cells(cells, closed=closed).to_dict())
    return path


def test_certify_convex_exit_codes(tmp_path):
    box = [(i, j) for i in range(6) for j in range(6)]
    code, text = run(['certify-convex', '--file', region_file(tmp_path, box)])
    assert code == 0
    assert json.loads(text)['verdict'] == 'Convex'

    notched = [(i, j) for i in range(12) for j in range(12) if i < 4 or j < 4]
    code, _ = run(['certify-convex', '--file', region_file(tmp_path, notched)])
    assert code == 1

    code, _ = run(['certify-convex', '--file', region_file(tmp_path, box, closed=False)])
    assert code == 3


def test_input_errors():
    assert run(['certify-convex', '--file', '/no/such/region.json'])[0] == 2
    assert run(['certify-convex'])[0] == 2
    assert run(['diagnose', '--scene', 'prato'])[0] == 2
    assert run(['diagnose', '--scene', 'circle_height_space', '--seed', '1'])[0] == 2
    assert run(['lgp', '--scene', 'segment_space', '--tol', '-1'])[0] == 2
    assert run(['lgp', '--scene', 'no_such_scene'])[0] == 2
    assert run(['experiment', 'horn', '--a', '0,1', '--b', '1,0', '--seed', '1'])[0] == 2
    assert run(['experiment', 'nope', '--seed', '1'])[0] == 2
    assert run([])[0] == 2


def test_malformed_file(tmp_path):
    path = os.path.join(str(tmp_path), 'broken.json')
    with open(path, 'w') as f:
        f.write('{"origin": [0, 0], ')
    assert run(['certify-convex', '--file', path])[0] == 2


def test_lgp_exit_codes():
    code, text = run(['lgp', '--scene', 'circle_height_space'])
    assert code == 1
    report = json.loads(text)
    assert report['command'] == 'lgp'
    assert report['hypotheses']['lfc_ok'] is False
    assert run(['lgp', '--scene', 'segment_space'])[0] == 0
    assert run(['lgp', '--scene', 'cylinder'])[0] == 0


def test_unexpected_failure_is_an_input_error(monkeypatch):
    def broken(config, stream=None):
        raise RuntimeError("boom")
    monkeypatch.setitem(DISPATCH, 'lgp', broken)
    assert run(['lgp', '--scene', 'segment_space'])[0] == 2


def test_tsv_format():
    code, text = run(['lgp', '--scene', 'segment_space', '--format', 'tsv'])
    assert code == 0
    assert text.splitlines()[0] == 'key\tvalue'


def test_reports_are_deterministic(tmp_path):
    argv = ['experiment', 'schur-horn', '--lambda', '2,1,0', '--trials', '2000', '--seed', '5']
    first = run(argv)
    second = run(argv)
    assert first[0] == 0
    assert first == second

    out = os.path.join(str(tmp_path), 'out')
    argv = ['diagnose', '--scene', 'c2_standard', '--h', '1/32', '--samples', '50000',
            '--seed', '2', '--out', out]
    first = run(argv)
    assert first[0] == 0
    assert first == run(argv)
    with open(os.path.join(out, 'diagnose.json')) as f:
        assert f.read() == first[1]
    assert os.path.exists(os.path.join(out, 'c2_standard_points.tsv'))


def test_run_config():
    with pytest.raises(InputError):
        RunConfig('diagnose', scene='prato')
    with pytest.raises(InputError):
        RunConfig('lgp', scene='segment_space', format='xml')
    with pytest.raises(InputError):
        RunConfig('lgp', scene='segment_space', samples=0)
    config = RunConfig('diagnose', scene='prato', seed=1)
    assert config.h_or(0.5) == 0.5
    assert parse_number('1/64') == pytest.approx(1.0 / 64)
    assert parse_vector('2, 1,0') == [2.0, 1.0, 0.0]
    with pytest.raises(InputError):
        parse_number('one')


if __name__ == "__main__":
    pytest.main([__file__])
