"""Small dense linear algebra: the Skew isometry, the so(3) metric and SVDs.

All functions broadcast over leading axes, so a stack of ``N`` vectors has
shape ``(N, 3)`` and a stack of matrices ``(N, 3, 3)``.
"""

import numpy as np

from .exceptions import ValidationError

EPS_M = 2.0**-52
"""Machine precision of IEEE double (spacing of floats at 1)."""

EPS_O3 = 8 * EPS_M
"""Best orthogonality error that can be guaranteed for stored rotations."""

_MAX_JACOBI_SWEEPS = 30


def skew(n):
    """Return the antisymmetric matrix ``N`` with ``N @ v == cross(n, v)``.

    Parameters
    ----------
    n : array_like, shape (..., 3)

    Returns
    -------
    N : ndarray, shape (..., 3, 3)
    """
    n = np.asarray(n, dtype=float)
    N = np.zeros(n.shape[:-1] + (3, 3))
    N[..., 0, 1] = -n[..., 2]
    N[..., 0, 2] = n[..., 1]
    N[..., 1, 0] = n[..., 2]
    N[..., 1, 2] = -n[..., 0]
    N[..., 2, 0] = -n[..., 1]
    N[..., 2, 1] = n[..., 0]
    return N


def unskew(N, check=True):
    """Inverse of :func:`skew`, reading the entries ``(N32, N13, N21)``.

    Raises
    ------
    ValidationError
        If ``check`` is set and ``max|N + N^T| > 8 eps``.
    """
    N = np.asarray(N, dtype=float)
    if check:
        asym = np.abs(N + np.swapaxes(N, -1, -2)).max(initial=0.0)
        if asym > 8 * EPS_M:
            raise ValidationError(f"matrix is not antisymmetric (|N + N^T| = {asym:.3g})")
    return np.stack([N[..., 2, 1], N[..., 0, 2], N[..., 1, 0]], axis=-1)


def so3_inner(V, W):
    """Scaled Frobenius product ``Tr(V^T W) / 2``."""
    V = np.asarray(V, dtype=float)
    W = np.asarray(W, dtype=float)
    return 0.5 * np.sum(V * W, axis=(-2, -1))


def so3_norm(V):
    """Norm induced by :func:`so3_inner`; ``so3_norm(skew(n)) == |n|``."""
    return np.sqrt(so3_inner(V, V))


def _complete_basis(U, sigma, tol):
    """Replace columns of ``U`` belonging to negligible singular values."""
    small = sigma <= tol
    if not small.any():
        return U
    for i in np.flatnonzero(small.any(axis=-1)):
        u = U[i]
        s = small[i]
        if s[0]:
            u[:] = np.eye(3)
            continue
        if s[1]:
            # any unit vector orthogonal to u0
            e = np.eye(3)[np.argmin(np.abs(u[:, 0]))]
            w = e - (e @ u[:, 0]) * u[:, 0]
            u[:, 1] = w / np.linalg.norm(w)
        u[:, 2] = np.cross(u[:, 0], u[:, 1])
    return U


def svd3(B):
    """Singular value decomposition of 3x3 matrices by one-sided Jacobi.

    Returns ``U, sigma, V`` with ``B = U @ diag(sigma) @ V.T``, ``sigma``
    descending and nonnegative. Works on stacks of shape ``(..., 3, 3)``.

    One-sided Jacobi is used instead of LAPACK because its factors are
    orthogonal to a few ulps, which the projection onto SO(3) depends on.
    No sign convention is imposed; ``det(U)`` and ``det(V)`` may be -1.
    """
    B = np.asarray(B, dtype=float)
    batch_shape = B.shape[:-2]
    A = B.reshape(-1, 3, 3).copy()
    V = np.broadcast_to(np.eye(3), A.shape).copy()

    for _ in range(_MAX_JACOBI_SWEEPS):
        rotated = False
        for p, q in ((0, 1), (0, 2), (1, 2)):
            ap = A[:, :, p]
            aq = A[:, :, q]
            alpha = np.einsum("ij,ij->i", ap, ap)
            beta = np.einsum("ij,ij->i", aq, aq)
            gamma = np.einsum("ij,ij->i", ap, aq)
            active = np.abs(gamma) > EPS_M * np.sqrt(alpha * beta)
            if not active.any():
                continue
            rotated = True
            zeta = (beta - alpha) / (2 * np.where(active, gamma, 1.0))
            t = np.where(zeta >= 0, 1.0, -1.0) / (np.abs(zeta) + np.sqrt(1 + zeta * zeta))
            t = np.where(active, t, 0.0)
            c = (1 / np.sqrt(1 + t * t))[:, None]
            s = c * t[:, None]
            A[:, :, p], A[:, :, q] = c * ap - s * aq, s * ap + c * aq
            vp = V[:, :, p].copy()
            vq = V[:, :, q]
            V[:, :, p], V[:, :, q] = c * vp - s * vq, s * vp + c * vq
        if not rotated:
            break

    sigma = np.sqrt(np.einsum("nij,nij->nj", A, A))
    order = np.argsort(-sigma, axis=-1, kind="stable")
    sigma = np.take_along_axis(sigma, order, axis=-1)
    A = np.take_along_axis(A, order[:, None, :], axis=-1)
    V = np.take_along_axis(V, order[:, None, :], axis=-1)

    tol = 64 * EPS_M * sigma[:, :1]
    U = A / np.where(sigma > tol, sigma, 1.0)[:, None, :]
    U = _complete_basis(U, sigma, np.maximum(tol, np.finfo(float).tiny))

    return (
        U.reshape(batch_shape + (3, 3)),
        sigma.reshape(batch_shape + (3,)),
        V.reshape(batch_shape + (3, 3)),
    )


def thin_svd(Y):
    """Thin SVD ``Y = U @ diag(sigma) @ V.T`` of an ``m x n`` matrix.

    Returns ``U`` (m, r), ``sigma`` (r,), ``V`` (n, r) with ``r = min(m, n)``.
    """
    Y = np.asarray(Y, dtype=float)
    if Y.ndim != 2 or min(Y.shape) < 1:
        raise ValidationError(f"expected a nonempty 2-d matrix, got shape {Y.shape}")
    if not np.isfinite(Y).all():
        raise ValidationError("matrix has non-finite entries")
    U, sigma, Vt = np.linalg.svd(Y, full_matrices=False)
    return U, sigma, Vt.T
