# -*- coding: utf-8 *-*
"""Build momentum maps from JSON descriptors

A descriptor is a built-in name, a dict {"builtin": name, "params": {...}}
or a composition {"compose": [descriptor, {"affine": {...}}, ...]}.

"""
from MomentumCheck.errors import InputError
from MomentumCheck.models.momentum import (AffineMomentum, CotangentCylinder,
                                           KarshonLerman, OrbitSum,
                                           ProjectiveToric, TorusQuadratic,
                                           TwoSheet)

BUILTIN_MOMENTA = ['c2_standard', 'c2_ball', 'prato', 'karshon_lerman',
                   'cp2_toric', 'cylinder', 'two_sheet', 'u2_orbit_sum']


class MomentumFactory(object):

    def __init__(self, params=None):
        self.params = dict(params or {})

    def c2_standard(self):
        return TorusQuadratic(**self.params)

    def c2_ball(self):
        params = dict(self.params)
        params.setdefault('ball', 1.0)
        return TorusQuadratic(**params)

    def prato(self):
        params = dict(self.params)
        params.setdefault('excluded_radius', 1.0)
        return TorusQuadratic(**params)

    def karshon_lerman(self):
        return KarshonLerman(**self.params)

    def cp2_toric(self):
        return ProjectiveToric(**self.params)

    def cylinder(self):
        return CotangentCylinder(**self.params)

    def two_sheet(self):
        return TwoSheet(**self.params)

    def u2_orbit_sum(self):
        return OrbitSum(**self.params)

    def build(self, name):
        if name not in BUILTIN_MOMENTA:
            raise InputError("unknown momentum map '{0}'; available: {1}"
                             .format(name, ', '.join(BUILTIN_MOMENTA)))
        try:
            return getattr(self, name)()
        except TypeError as e:
            raise InputError("bad parameters for '{0}': {1}".format(name, e))


def build_momentum(descriptor):
    """Momentum map of a descriptor

    Raises:
        InputError: Unknown names, bad parameters or malformed compositions
    """
    if isinstance(descriptor, str):
        return MomentumFactory().build(descriptor)
    if not isinstance(descriptor, dict):
        raise InputError("momentum descriptor must be a name or an object")
    if 'builtin' in descriptor:
        return MomentumFactory(descriptor.get('params')).build(descriptor['builtin'])
    if 'compose' in descriptor:
        parts = list(descriptor['compose'])
        if not parts:
            raise InputError("empty composition")
        momentum = build_momentum(parts[0])
        for part in parts[1:]:
            if not isinstance(part, dict) or 'affine' not in part:
                raise InputError("only affine maps can follow the first map of a composition")
            affine = part['affine']
            if 'matrix' not in affine:
                raise InputError("affine map without a matrix")
            momentum = AffineMomentum(momentum, affine['matrix'], affine.get('offset'))
        return momentum
    raise InputError("momentum descriptor needs 'builtin' or 'compose'")
