"""Exception hierarchy.

Validation problems (bad shapes, broken invariants, malformed files) derive
from :class:`ValidationError`; failures of the numerical algorithms themselves
(singularities, ill-posed lifts, non-convergence) derive from
:class:`NumericalError`. The CLI maps the two families to distinct exit codes.
"""


class GeoPgaError(Exception):
    """Base class for all errors raised by geopga."""


class ValidationError(GeoPgaError, ValueError):
    """Input data violates a documented precondition or invariant."""


class NumericalError(GeoPgaError, ArithmeticError):
    """A numerical algorithm cannot produce a well-defined result."""


class SingularityError(NumericalError):
    """Evaluation at a point where a map is undefined or not unique."""


class BranchBoundaryError(SingularityError):
    """Tangent vector lies on a branch boundary; its branch image is not unique."""


class IllPosedLiftError(NumericalError):
    """Consecutive snapshots are too far apart for a unique lift."""


class ConvergenceError(NumericalError):
    """An iterative method did not converge within its iteration budget."""
