# -*- coding: utf-8 *-*
"""JSON loaders and writers

Every reader wraps I/O and format failures in an InputError naming the
file. Included functions:

    - load_json
    - save_json
    - load_region
    - load_cone
    - load_local_model
    - load_space
    - load_scene
    - load_certificate
    - load_input

"""
import json
import logging
import os

from MomentumCheck.diagnosis.scene import Scene
from MomentumCheck.errors import InputError
from MomentumCheck.geometry.cone import cone_from_dict
from MomentumCheck.geometry.grid import GridRegion
from MomentumCheck.geometry.klee import certificate_from_dict
from MomentumCheck.lgp.space import DiscreteSpace
from MomentumCheck.models.local_model import LocalModel
from MomentumCheck.util.data_util import to_json_text

log = logging.getLogger(__name__)


def load_json(path):
    """Parsed JSON object of a file

    Raises:
        InputError: Missing file, unreadable file or malformed JSON
    """
    try:
        with open(path, 'r') as f:
            payload = json.load(f)
    except (IOError, OSError) as e:
        raise InputError("cannot read {0}: {1}".format(path, e.strerror or e))
    except ValueError as e:
        raise InputError("malformed JSON in {0}: {1}".format(path, e))
    if not isinstance(payload, dict):
        raise InputError("{0} does not hold a JSON object".format(path))
    return payload


def save_json(path, payload):
    """Write a report with sorted keys and the schema version"""
    directory = os.path.dirname(path)
    if directory and not os.path.exists(directory):
        os.makedirs(directory)
    with open(path, 'w') as f:
        f.write(to_json_text(payload))
    return path


def _parse(path, build):
    payload = load_json(path)
    try:
        return build(payload)
    except (KeyError, TypeError, ValueError) as e:
        raise InputError("{0}: {1}".format(path, e))


def load_region(path):
    return _parse(path, GridRegion.from_dict)


def load_cone(path):
    return _parse(path, cone_from_dict)


def load_local_model(path):
    return _parse(path, LocalModel.from_dict)


def load_space(path):
    return _parse(path, DiscreteSpace.from_dict)


def load_scene(path):
    return _parse(path, Scene.from_dict)


def load_certificate(path):
    return _parse(path, certificate_from_dict)


def load_input(path):
    """Region, discrete space or scene, told apart by their fields"""
    payload = load_json(path)
    if 'cells' in payload:
        build = GridRegion.from_dict
    elif 'vertices' in payload:
        build = DiscreteSpace.from_dict
    elif 'builtin' in payload or 'compose' in payload:
        build = Scene.from_dict
    else:
        raise InputError("{0} is neither a region, a discrete space nor a scene".format(path))
    try:
        return build(payload)
    except (KeyError, TypeError, ValueError) as e:
        raise InputError("{0}: {1}".format(path, e))
