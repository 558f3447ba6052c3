"""Exponential and logarithm maps, lifts and projections on SO(3).

Tangent vectors are rotation vectors ``n = theta * u`` in R^3, identified
with so(3) through :func:`~geopga.linalg.skew`. Vectorized functions accept
stacks ``(..., 3)`` of vectors and ``(..., 3, 3)`` of matrices.
"""

import math
from typing import NamedTuple

import numpy as np

from .branches import branch_index, branch_map
from .exceptions import SingularityError, ValidationError
from .linalg import EPS_M, EPS_O3, skew, svd3

DELTA_1 = 2.0**-50
"""``c >= 1 - DELTA_1``: the logarithm is zero."""

DELTA_2 = 2.0**-42
"""``c >= 1 - DELTA_2``: first-order logarithm ``(R - R^T) / 2``."""

DELTA_3 = 2.0**-28
"""``c <= -1 + DELTA_3``: angle pi with the axis read off the diagonal."""

_I3 = np.eye(3)


class AxisAngle(NamedTuple):
    """Rotation angle ``theta`` in ``[0, pi]`` and unit axis ``u`` (zero if theta == 0)."""

    theta: np.ndarray
    u: np.ndarray

    @property
    def vector(self):
        return np.asarray(self.theta)[..., None] * self.u


def orth_error(R):
    """Orthogonality error ``max |R^T R - I|`` over the nine entries."""
    R = np.asarray(R, dtype=float)
    return np.abs(np.swapaxes(R, -1, -2) @ R - _I3).max(axis=(-2, -1))


def _newton_orthogonalize(R):
    # one Newton step for R^T R = I
    return 1.5 * R - 0.5 * R @ (np.swapaxes(R, -1, -2) @ R)


def reorthogonalize(R):
    """Apply one Newton step to the matrices whose orthogonality error exceeds EPS_O3."""
    R = np.asarray(R, dtype=float)
    if R.ndim == 2:
        return reorthogonalize(R[None])[0]
    bad = orth_error(R) > EPS_O3
    if np.any(bad):
        R = R.copy()
        R[bad] = _newton_orthogonalize(R[bad])
    return R


def exp_so3(n):
    """Rotation ``exp(skew(n)) = I + sin(t) U + (1 - cos(t)) U^2``, ``t = |n|``.

    Returns the identity where ``|n| <= eps``. The factor ``1 - cos t`` is
    evaluated as ``2 sin^2(t/2)``; outputs with orthogonality error above
    ``EPS_O3`` (about one in 10^6) get one Newton correction.
    """
    n = np.asarray(n, dtype=float)
    theta = np.linalg.norm(n, axis=-1)
    small = theta <= EPS_M
    u = n / np.where(small, 1.0, theta)[..., None]
    U = skew(u)
    U2 = u[..., :, None] * u[..., None, :] - _I3
    s = np.sin(theta)[..., None, None]
    h = (2 * np.sin(0.5 * theta) ** 2)[..., None, None]
    R = _I3 + s * U + h * U2
    R = np.where(small[..., None, None], _I3, R)
    return reorthogonalize(R)


def boundary_axis(R, check=True):
    """Lexicographically positive axis ``u(R)`` of a rotation by (nearly) pi.

    Magnitudes come from the diagonal, ``|u_i| = sqrt((R_ii + 1) / 2)``; the
    signs from the off-diagonal entries: flip ``u2`` if ``R21 < 0`` and
    ``u3`` if ``R31 < 0``, or, when ``u1 == 0`` (tested as ``u1 <= 4 eps``),
    flip ``u3`` if ``R32 < 0``. The result is normalized and its first
    nonzero entry made positive.
    """
    R = np.asarray(R, dtype=float)
    if check:
        c = (np.trace(R, axis1=-2, axis2=-1) - 1) / 2
        if np.any(c > -1 + DELTA_3):
            raise ValidationError("boundary_axis requires a rotation angle within 2**-28 of pi")
    diag = np.diagonal(R, axis1=-2, axis2=-1)
    u = np.sqrt(np.maximum(0.0, 0.5 * diag + 0.5))
    u1, u2, u3 = u[..., 0], u[..., 1], u[..., 2]
    # with u1 == 0 the entries R21 = 2 u1 u2 and R31 = 2 u1 u3 are pure roundoff
    u1_zero = u1 <= 4 * EPS_M
    u2 = np.where(~u1_zero & (R[..., 1, 0] < 0), -u2, u2)
    flip3 = np.where(u1_zero, R[..., 2, 1] < 0, R[..., 2, 0] < 0)
    u3 = np.where(flip3, -u3, u3)
    u = np.stack([u1, u2, u3], axis=-1)
    u = u / np.linalg.norm(u, axis=-1, keepdims=True)
    # canonical sign: first entry above roundoff level is positive
    significant = np.abs(u) > 4 * EPS_M
    first = np.argmax(significant, axis=-1)
    lead = np.take_along_axis(u, first[..., None], axis=-1)
    return np.where(lead < 0, -u, u)


def log_so3(R):
    """Principal logarithm of a rotation in axis-angle form.

    With ``c = (Tr R - 1) / 2`` and ``v = unskew(R - R^T)`` (so ``|v| = 2 sin t``)::

        c in [1 - 2**-50, 1]          theta = 0, u = 0
        c in [1 - 2**-42, 1 - 2**-50) theta = |v| / 2, u = v / |v|
        c in (-1 + 2**-28, 1 - 2**-42) theta = atan2(|v|, Tr R - 1), u = v / |v|
        c in [-1, -1 + 2**-28]        theta = pi, u = boundary_axis(R)

    Returns
    -------
    AxisAngle
        ``theta`` has shape ``R.shape[:-2]``, ``u`` shape ``R.shape[:-1]``.
    """
    R = np.asarray(R, dtype=float)
    tr = np.trace(R, axis1=-2, axis2=-1)
    c = np.clip((tr - 1) / 2, -1.0, 1.0)
    v = np.stack([R[..., 2, 1] - R[..., 1, 2],
                  R[..., 0, 2] - R[..., 2, 0],
                  R[..., 1, 0] - R[..., 0, 1]], axis=-1)
    nv = np.linalg.norm(v, axis=-1)

    zero = (c >= 1 - DELTA_1) | (nv == 0)
    first_order = ~zero & (c >= 1 - DELTA_2)
    half_turn = c <= -1 + DELTA_3

    safe_nv = np.where(nv == 0, 1.0, nv)
    u = v / safe_nv[..., None]
    theta = np.where(first_order, 0.5 * nv, np.arctan2(nv, tr - 1))
    theta = np.where(zero, 0.0, theta)
    u = np.where(zero[..., None], 0.0, u)
    if np.any(half_turn):
        theta = np.where(half_turn, np.pi, theta)
        axis = boundary_axis(R, check=False)
        u = np.where(half_turn[..., None], axis, u)
    return AxisAngle(theta, u)


def rotation_vector(R):
    """Principal logarithm as a rotation vector ``theta * u``."""
    return log_so3(R).vector


def proj_so3(B, refine=True):
    """Nearest rotation ``U V^T`` to ``B`` from its SVD ``B = U S V^T``.

    If ``refine`` is set and the orthogonality error exceeds ``EPS_O3``, one
    Newton step for ``R^T R = I`` is applied.

    Raises
    ------
    SingularityError
        If ``det(B) <= 0``.
    """
    B = np.asarray(B, dtype=float)
    if not np.isfinite(B).all():
        raise ValidationError("matrix has non-finite entries")
    if np.any(np.linalg.det(B) <= 0):
        raise SingularityError("no proper rotation projection for det(B) <= 0")
    U, _, V = svd3(B)
    R = U @ np.swapaxes(V, -1, -2)
    if not refine:
        return R
    return reorthogonalize(R)


def geodesic_dist_so3(R, S):
    """Rotation angle of ``R^T S`` in ``[0, pi]``.

    Evaluated as ``atan2(|unskew(M - M^T)|, Tr M - 1)`` with ``M = R^T S``,
    accurate near 0 and pi.
    """
    R = np.asarray(R, dtype=float)
    S = np.asarray(S, dtype=float)
    M = np.swapaxes(R, -1, -2) @ S
    v = np.stack([M[..., 2, 1] - M[..., 1, 2],
                  M[..., 0, 2] - M[..., 2, 0],
                  M[..., 1, 0] - M[..., 0, 1]], axis=-1)
    return np.arctan2(np.linalg.norm(v, axis=-1), np.trace(M, axis1=-2, axis2=-1) - 1)


def branch_map_so3(n, k, l):
    """Map the rotation vector ``n`` from shell ``k`` to shell ``l`` keeping ``exp``."""
    return branch_map(n, k, l)


def lift_map_so3(prev, R):
    """Lift ``R`` into so(3) continuing from the previous lift ``prev``.

    Three regimes: the quick return ``|prev| + theta < pi`` (principal branch);
    ``prev`` and the axis of ``R`` numerically collinear, where even
    boundaries (through the identity) can be crossed; and the general case,
    which decides whether the odd boundary of the current shell was crossed
    by comparing the two candidate images against ``prev``.

    Parameters
    ----------
    prev : ndarray, shape (3,)
        Previous lifted rotation vector.
    R : ndarray, shape (3, 3)
        New rotation, relative to the base of the tangent space.

    Returns
    -------
    n : ndarray, shape (3,)
    """
    prev = np.asarray(prev, dtype=float)
    theta0 = float(np.linalg.norm(prev))
    aa = log_so3(R)
    theta = float(aa.theta)
    u = aa.u
    if theta0 + theta < math.pi:
        return theta * u
    if theta == 0.0:
        # R is the identity: stay on the even boundary nearest to prev
        j = round(theta0 / (2 * math.pi))
        return (2 * j * math.pi / theta0) * prev

    s = float(prev @ u)
    if abs(abs(s) - theta0) < 8 * EPS_O3 * theta0:
        # prev and u are collinear
        signed = -theta if s < 0 else theta
        if theta0 - signed < math.pi:
            return theta * u
        ell = math.floor((theta0 - signed) / math.pi)
        if ell % 2:
            ell += 1
        if signed > 0:
            return (signed + ell * math.pi) * u
        return -(signed + ell * math.pi) * u

    k = ell = math.floor(theta0 / math.pi)
    odd = k % 2
    n = prev
    if k != 0:
        n = (1 - (k + odd) * math.pi / theta0) * prev
    if np.linalg.norm(theta * u - n) > np.linalg.norm((theta - 2 * math.pi) * u - n):
        ell += -1 if odd else 1
    if ell % 2:
        theta = theta - (ell + 1) * math.pi
    else:
        theta = theta + ell * math.pi
    return theta * u


def shell_index(n):
    """Shell index of the rotation vector ``n`` (see :func:`branch_index`)."""
    return branch_index(np.linalg.norm(np.asarray(n, dtype=float), axis=-1))
