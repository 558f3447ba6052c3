"""Exponential and logarithm maps, lifts and projections on the unit sphere.

Directors are unit 3-vectors ``d``; tangent vectors at ``d`` are stored in
ambient form, i.e. as 3-vectors ``v`` with ``<d, v> = 0``. Vectorized
functions accept stacks of shape ``(..., 3)``.
"""

import math

import numpy as np

from .branches import branch_index, branch_map
from .exceptions import SingularityError
from .linalg import EPS_M

DELTA = 2.0**-21
"""Threshold on ``1 + <d, e>`` below which the logarithm normalizes first."""

TAU_PASS = EPS_M
"""Lift map: the geodesic passes through +d or -d."""

TAU_NEAR = 4 * EPS_M
"""Lift map: the new snapshot coincides numerically with +d or -d."""

SOUTH_POLE_TOL = 1e-8


def _dot(a, b):
    return np.sum(a * b, axis=-1)


def exp_s2(d, v):
    """Exponential map ``exp_d(v) = cos|v| d + sin|v| / |v| v``.

    Returns ``d`` itself where ``|v| <= eps``. The roundoff component of
    ``v`` along ``d`` is removed first; left in, it would be scaled by
    ``sin|v| / |v|`` into the normality error of the result.
    """
    d = np.asarray(d, dtype=float)
    v = np.asarray(v, dtype=float)
    v = v - _dot(d, v)[..., None] * d
    theta = np.linalg.norm(v, axis=-1)
    small = theta <= EPS_M
    safe = np.where(small, 1.0, theta)
    e = np.cos(theta)[..., None] * d + (np.sin(theta) / safe)[..., None] * v
    return np.where(small[..., None], d, e)


def log_s2(d, e):
    """Principal logarithm ``log_d(e)`` with values in the closed disk of radius pi.

    With ``c = <d, e>``, ``p = e - c d``, ``s = |p|`` and the angle
    ``t = atan2(s, c)`` (equal to ``arccos(c)`` for unit vectors)::

        0                if s <= eps and c > -1 + 2**-21
        (t / s) p        if c > -1 + 2**-21
        t w              otherwise

    where ``w`` is ``p`` re-projected onto the tangent plane and normalized.
    At the exact antipode, where ``p`` is pure roundoff or zero, ``w`` is
    whatever tangent direction remains, or a fixed perpendicular of ``d``
    (one of infinitely many logarithms).
    """
    d = np.asarray(d, dtype=float)
    e = np.asarray(e, dtype=float)
    c = _dot(d, e)
    p = e - c[..., None] * d
    s = np.linalg.norm(p, axis=-1)
    angle = np.arctan2(s, c)
    near_antipode = c <= -1 + DELTA
    zero = (s <= EPS_M) & ~near_antipode
    safe_s = np.where(s <= EPS_M, 1.0, s)
    v = (angle / safe_s)[..., None] * p
    if np.any(near_antipode):
        v = np.where(near_antipode[..., None], angle[..., None] * _antipodal_direction(d, p), v)
    return np.where(zero[..., None], 0.0, v)


def _antipodal_direction(d, p):
    # unit tangent at d along p; p carries little more than roundoff there, so
    # it is re-projected (twice, as in Gram-Schmidt), and replaced by a fixed
    # perpendicular when it vanishes
    q = p - _dot(d, p)[..., None] * d
    q = q - _dot(d, q)[..., None] * d
    nq = np.linalg.norm(q, axis=-1)
    k = np.argmin(np.abs(d), axis=-1)
    w = np.cross(d, np.eye(3)[k])
    w = w / np.linalg.norm(w, axis=-1, keepdims=True)
    fallback = nq <= EPS_M * EPS_M
    return np.where(fallback[..., None], w, q / np.where(fallback, 1.0, nq)[..., None])


def proj_s2(x):
    """Orthogonal projection ``x / |x|`` of a nonzero vector onto the sphere."""
    x = np.asarray(x, dtype=float)
    r = np.linalg.norm(x, axis=-1)
    if np.any(r == 0) or not np.isfinite(r).all():
        raise SingularityError("cannot project the zero vector onto the sphere")
    return x / r[..., None]


def geodesic_dist_s2(d, e):
    """Great-circle distance in ``[0, pi]``.

    Evaluated as ``atan2(|d x e|, <d, e>)``, which stays accurate for nearly
    equal and nearly antipodal directors where ``arccos`` does not.
    """
    d = np.asarray(d, dtype=float)
    e = np.asarray(e, dtype=float)
    return np.arctan2(np.linalg.norm(np.cross(d, e), axis=-1), _dot(d, e))


def branch_map_s2(v, k, l):
    """Map the tangent vector ``v`` from annulus ``k`` to annulus ``l``.

    The image under :func:`exp_s2` is unchanged. Raises
    :class:`~geopga.exceptions.BranchBoundaryError` on annulus boundaries.
    """
    return branch_map(v, k, l)


def lift_map_s2(d, prev, e):
    """Lift ``e`` into the tangent space at ``d`` continuing from ``prev``.

    ``prev`` is the lift of the previous snapshot. The result is the
    logarithm of ``e`` on the branch reached by following the geodesic from
    ``exp_d(prev)`` to ``e``; branches change only where that geodesic runs
    through ``+d`` or ``-d``.

    Parameters
    ----------
    d : ndarray, shape (3,)
        Base director of the tangent space.
    prev : ndarray, shape (3,)
        Previous lifted tangent vector.
    e : ndarray, shape (3,)
        New director.

    Returns
    -------
    v : ndarray, shape (3,)
    """
    d = np.asarray(d, dtype=float)
    prev = np.asarray(prev, dtype=float)
    e = np.asarray(e, dtype=float)

    theta = float(np.linalg.norm(prev))
    u = prev / theta if theta > 0 else np.zeros(3)
    k = int(theta // math.pi)
    odd = k % 2

    c = float(d @ e)
    if 1 - c <= TAU_NEAR:
        # e == +d: land on the even boundary nearest to prev
        return (k + odd) * math.pi * u
    if 1 + c <= TAU_NEAR:
        # e == -d: land on the odd boundary nearest to prev
        return (k + 1 - odd) * math.pi * u

    ell = k
    p = e - c * d
    phi = math.atan2(float(np.linalg.norm(p)), c)
    sign_k = -1.0 if odd else 1.0
    w = sign_k * p / np.linalg.norm(p)
    if float(u @ w) + 1 <= TAU_PASS:
        # geodesic passes through +d or -d
        w = -w
        candidate = ((ell + 2 - odd) * math.pi - sign_k * phi) * w - theta * u
        if np.linalg.norm(candidate) < math.pi and (k > 0 or phi > 1):
            ell += 1
        elif ell == 0:
            w = -w
        else:
            ell -= 1
        odd = ell % 2
    # w carries the sign (-1)**ell at this point, so the angle must too
    sign_l = -1.0 if odd else 1.0
    return ((ell + odd) * math.pi + sign_l * phi) * w


def north_rotation_matrix(d):
    """Rotation ``R(d)`` taking ``d`` to the north pole ``(0, 0, 1)``.

    Undefined at the south pole.
    """
    d = np.asarray(d, dtype=float)
    d1, d2, d3 = d[..., 0], d[..., 1], d[..., 2]
    if np.any(np.linalg.norm(d - np.array([0.0, 0.0, -1.0]), axis=-1) <= SOUTH_POLE_TOL):
        raise SingularityError("north-pole rotation is undefined at the south pole")
    q = 1.0 / (1.0 + d3)
    R = np.empty(d.shape[:-1] + (3, 3))
    R[..., 0, 0] = 1 - q * d1 * d1
    R[..., 0, 1] = -q * d1 * d2
    R[..., 0, 2] = -d1
    R[..., 1, 0] = -q * d1 * d2
    R[..., 1, 1] = 1 - q * d2 * d2
    R[..., 1, 2] = -d2
    R[..., 2, 0] = d1
    R[..., 2, 1] = d2
    R[..., 2, 2] = 1 - q * (d1 * d1 + d2 * d2)
    return R


def north_rotation_coords(d, v):
    """Coordinates of ``v`` in ``T_d S^2`` after rotating ``d`` to the north pole.

    Returns the first two entries of ``R(d) v``. For exactly tangent ``v`` they
    equal ``(v1 - d1 q v3, v2 - d2 q v3)`` with ``q = 1 / (1 + d3)``; the
    full rows are used because they ignore any roundoff component of ``v``
    along ``d`` (``R(d) d = e3``), which the short form amplifies by ``q``.

    Returns
    -------
    ab : ndarray, shape (..., 2)
    """
    v = np.asarray(v, dtype=float)
    R = north_rotation_matrix(d)
    return np.einsum("...ij,...j->...i", R[..., :2, :], v)


def north_rotation_vector(d, ab):
    """Inverse of :func:`north_rotation_coords`: ambient tangent vector at ``d``."""
    ab = np.asarray(ab, dtype=float)
    R = north_rotation_matrix(d)
    # R^T (a, b, 0)
    return ab[..., 0, None] * R[..., 0, :] + ab[..., 1, None] * R[..., 1, :]


def annulus_index(v):
    """Annulus index of the tangent vector ``v`` (see :func:`branch_index`)."""
    return branch_index(np.linalg.norm(np.asarray(v, dtype=float), axis=-1))
