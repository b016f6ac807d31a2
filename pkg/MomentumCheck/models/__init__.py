from .local_model import (LocalModel, ModelSample, ModelSampler, local_cone,
                          normal_form_momentum, check_vertex_neighborhood,
                          check_open_onto_cone, local_fiber_components)
from .momentum import MomentumMap
from .momentumfactory import BUILTIN_MOMENTA, build_momentum
