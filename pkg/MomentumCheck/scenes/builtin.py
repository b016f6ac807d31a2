# -*- coding: utf-8 *-*
"""Built-in scenes

Scenes pair a built-in momentum map with its image box and with the
metadata the openness criteria rely on. Names of built-in discrete spaces
resolve to the space itself.

"""
import logging

from MomentumCheck.diagnosis.scene import Scene
from MomentumCheck.errors import InputError
from MomentumCheck.models.momentumfactory import MomentumFactory
from MomentumCheck.scenes.spaces import BUILTIN_SPACES

log = logging.getLogger(__name__)

# fibers_connected, locally_compact, closed_map
SCENE_METADATA = {
    'c2_standard': (True, True, True),
    'c2_ball': (True, True, True),
    'prato': (True, True, False),
    'karshon_lerman': (True, True, False),
    'cp2_toric': (True, True, True),
    'cylinder': (True, True, True),
    'two_sheet': (False, True, True),
    'u2_orbit_sum': (True, True, True),
}

BUILTIN_SCENES = sorted(SCENE_METADATA) + sorted(BUILTIN_SPACES)


def builtin_scene(name, params=None):
    """Scene (or discrete space) of a built-in name

    Args:
        name (str): A name in BUILTIN_SCENES
        params (:obj:`dict`, optional): Momentum map parameters

    Returns:
        Scene or DiscreteSpace: The scene

    Raises:
        InputError: Unknown name
    """
    if name in BUILTIN_SPACES:
        return BUILTIN_SPACES[name](**(params or {}))
    if name not in SCENE_METADATA:
        raise InputError("unknown scene '{0}'; available: {1}"
                         .format(name, ', '.join(BUILTIN_SCENES)))
    momentum = MomentumFactory(params).build(name)
    fibers, compact, closed = SCENE_METADATA[name]
    return Scene(name, momentum,
                 metadata={'fibers_connected': fibers,
                           'locally_compact': compact,
                           'closed_map': closed})
