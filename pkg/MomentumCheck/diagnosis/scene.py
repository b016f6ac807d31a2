# -*- coding: utf-8 *-*
"""Scenes: a momentum map together with what is known about it

The momentum map carries the domain sampler, the regular stratum and the
optional fiber oracle. The scene adds the image box, the group tag and
the metadata the openness criteria branch on:

    - fibers_connected
    - locally_compact
    - closed_map

"""
import logging

import numpy as np

from MomentumCheck.errors import InputError
from MomentumCheck.models.momentumfactory import build_momentum

log = logging.getLogger(__name__)

GROUPS = ['torus', 'u(n)']
METADATA_KEYS = ['fibers_connected', 'locally_compact', 'closed_map']


class Scene(object):
    def __init__(self, name, momentum, box=None, fixed_points=None, group=None, metadata=None):
        """Scene class initializer

        Args:
            name (str): Scene name
            momentum (MomentumMap): The map, its sampler and regular stratum
            box (:obj:`tuple`, optional): (lo, hi) image box. Defaults to
                the momentum map's box
            fixed_points (:obj:`list`, optional): Fixed point images.
                Defaults to the momentum map's
            group (:obj:`str`, optional): 'torus' or 'u(n)'
            metadata (:obj:`dict`, optional): Booleans for METADATA_KEYS,
                false when absent

        """
        self.name = name
        self.momentum = momentum
        lo, hi = momentum.image_box if box is None else box
        self.box = (np.asarray(lo, dtype=float), np.asarray(hi, dtype=float))
        if self.box[0].shape != (momentum.dim_target,) or self.box[1].shape != (momentum.dim_target,):
            raise InputError("scene box must have dimension {0}".format(momentum.dim_target))
        if np.any(self.box[1] <= self.box[0]):
            raise InputError("scene box is empty")
        points = momentum.fixed_points if fixed_points is None else fixed_points
        self.fixed_points = [np.asarray(p, dtype=float) for p in points]
        self.group = group or momentum.group
        if self.group not in GROUPS:
            raise InputError("unknown group tag '{0}'".format(self.group))
        metadata = dict(metadata or {})
        unknown = set(metadata) - set(METADATA_KEYS)
        if unknown:
            raise InputError("unknown scene metadata: {0}".format(', '.join(sorted(unknown))))
        self.metadata = {k: bool(metadata.get(k, False)) for k in METADATA_KEYS}

    @property
    def dim_target(self):
        return self.momentum.dim_target

    def to_dict(self):
        descriptor = self.momentum.descriptor()
        payload = {'name': self.name,
                   'box': [self.box[0].tolist(), self.box[1].tolist()],
                   'regular': self.momentum.name,
                   'fixed_points': [p.tolist() for p in self.fixed_points],
                   'group': self.group,
                   'metadata': dict(self.metadata)}
        payload.update(descriptor)
        return payload

    @classmethod
    def from_dict(cls, payload):
        if 'builtin' in payload:
            descriptor = {'builtin': payload['builtin'], 'params': payload.get('params')}
        elif 'compose' in payload:
            descriptor = {'compose': payload['compose']}
        else:
            raise InputError("scene JSON needs 'builtin' or 'compose'")
        momentum = build_momentum(descriptor)
        box = payload.get('box')
        if box is not None and len(box) != 2:
            raise InputError("scene box must be [lo, hi]")
        return cls(payload.get('name', momentum.name), momentum, box=box,
                   fixed_points=payload.get('fixed_points'), group=payload.get('group'),
                   metadata=payload.get('metadata'))


def draw_chunk(rng, start, size, momentum, total):
    """Sampling chunk: accepted domain points, their values and regular flags

    Returns:
        tuple: (points, values, regular, number drawn)
    """
    X = momentum.draw(rng, start, size, total)
    keep = momentum.accept(X)
    X = X[keep]
    if len(X) == 0:
        return X, np.zeros((0, momentum.dim_target)), np.zeros(0, dtype=bool), size
    return X, momentum.evaluate(X), momentum.regular(X), size
