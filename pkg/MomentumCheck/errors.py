# -*- coding: utf-8 *-*
"""Exceptions raised by MomentumCheck

The command line front end maps these onto exit codes:

    - InputError, SamplerMismatchError, DisconnectedSampleGraphError -> 2
    - HypothesisUnavailableError, UndecidableError -> 3

"""


class MomentumCheckError(Exception):
    """Base class for every error raised by this package"""


class InputError(MomentumCheckError, ValueError):
    """Malformed input, dimension mismatch or unknown name"""


class EmptyFiberError(InputError):
    """Requested value lies outside the local cone"""


class HypothesisUnavailableError(MomentumCheckError):
    """A theorem hypothesis needed by the check is not available"""


class SamplerMismatchError(MomentumCheckError):
    """The rejection sampler accepts too few points to be meaningful"""


class DisconnectedSampleGraphError(MomentumCheckError):
    """A sample graph split although the scene domain is connected"""


class UndecidableError(MomentumCheckError):
    """The check cannot be decided for this input"""
