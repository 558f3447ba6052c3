"""Principal geodesic analysis of trajectories on S2, SO(3) and their products."""

from .estimators import IntrinsicMean, PrincipalGeodesicAnalysis
from .exceptions import (
    BranchBoundaryError,
    ConvergenceError,
    GeoPgaError,
    IllPosedLiftError,
    NumericalError,
    SingularityError,
    ValidationError,
)
from .lift import LiftedTrajectory, lift_trajectory, reconstruct_point, reconstruct_points
from .linalg import EPS_M, EPS_O3
from .manifold import Layout
from .pga import MeanConfig, PgaModel, intrinsic_mean, pga_fit, reconstruct_trajectory, truncate
from .rotation import exp_so3, log_so3, proj_so3
from .sphere import exp_s2, log_s2, proj_s2
from .trajgen import GenSpec, generate, haar_rotation

__version__ = "0.1.0"
