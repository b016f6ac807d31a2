from .check_session import CheckSession
from .convex_session import ConvexitySession
from .diagnose_session import DiagnoseSession
from .lgp_session import LgpSession
from .experiment_session import ExperimentSession
