"""Position translation vector kinematics for strapdown inertial navigation.

Core pieces:

* :mod:`ptvkin.rotkin` -- rotation-vector / quaternion primitives
* :mod:`ptvkin.coeffs` -- removable-singularity coefficient functions
* :mod:`ptvkin.transvec` -- algebraic translation-vector maps
* :mod:`ptvkin.dynamics` -- rate equations and the RK4 integrator
* :mod:`ptvkin.oracle` -- analytic profiles and the ground-truth generator
* :mod:`ptvkin.api` / :mod:`ptvkin.cli` -- HTTP service and thin CLI client
"""

from .errors import ConvergenceError, DomainError, KindError, SingularMapError
from .transvec import Kind, TranslationVector, Twist, new_ptv, savage_ptv, vtv
from .dynamics import Formulation

__all__ = [
    "ConvergenceError", "DomainError", "KindError", "SingularMapError",
    "Kind", "TranslationVector", "Twist", "new_ptv", "savage_ptv", "vtv",
    "Formulation",
]

__version__ = "0.1.0"
