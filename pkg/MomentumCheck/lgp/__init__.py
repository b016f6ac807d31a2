from .space import DiscreteSpace, FiberQuotient, build_quotient, quotient_metric
from .engine import (LgpParams, LgpVerdict, check_lfc, check_local_convexity_data,
                     geodesic_straightness, lgp_verdict, lgp_exit_code)
