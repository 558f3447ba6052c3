"""Branch bookkeeping shared by the sphere and rotation tangent spaces.

Both tangent spaces are cut into shells ``k*pi < |v| < (k+1)*pi``; the
exponential map is injective on each shell and the bijections between them
are the same formula on S^2 and SO(3).
"""

import math

import numpy as np

from .exceptions import BranchBoundaryError, ValidationError
from .linalg import EPS_M

BOUNDARY_TOL = 64 * EPS_M


def branch_index(theta):
    """Index of the shell containing a tangent vector of norm ``theta``.

    Points within ``64 eps`` (relative) of a boundary ``j*pi`` are assigned
    index ``j``, so a lift that reaches the boundary counts as having crossed.
    """
    theta = np.asarray(theta, dtype=float)
    j = np.rint(theta / np.pi)
    on_boundary = np.abs(theta - j * np.pi) <= BOUNDARY_TOL * np.maximum(1.0, theta)
    k = np.where(on_boundary, j, np.floor(theta / np.pi))
    k = k.astype(int)
    return int(k) if k.ndim == 0 else k


def count_crossings(branches):
    """Number of branch changes along a sequence of branch indices."""
    branches = np.asarray(branches)
    if branches.shape[0] < 2:
        return 0
    return int(np.abs(np.diff(branches, axis=0)).sum())


def branch_map(v, k, l):
    """Map a tangent vector from shell ``k`` to shell ``l`` keeping its image.

    With ``v = theta * u``, returns ``((l - k) pi + theta) u`` for even
    ``l - k`` and ``((l + k + 1) pi - theta) (-u)`` for odd ``l - k``.
    """
    if k < 0 or l < 0:
        raise ValidationError("branch indices must be nonnegative")
    v = np.asarray(v, dtype=float)
    theta = float(np.linalg.norm(v))
    nearest = round(theta / math.pi)
    if abs(theta - nearest * math.pi) <= 4 * EPS_M * max(1.0, theta):
        raise BranchBoundaryError(
            f"|v| = {theta!r} lies on the branch boundary {nearest}*pi")
    if not k * math.pi < theta < (k + 1) * math.pi:
        raise ValidationError(f"|v| = {theta!r} is not inside shell {k}")
    if k == l:
        return v.copy()
    u = v / theta
    if (l - k) % 2 == 0:
        return ((l - k) * math.pi + theta) * u
    return ((l + k + 1) * math.pi - theta) * (-u)
