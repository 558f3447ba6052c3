"""Input validation for snapshots, directors and rotations."""

import numpy as np
from sklearn.utils import check_array

from .exceptions import SingularityError, ValidationError
from .linalg import EPS_M, EPS_O3
from .manifold import R3, S2, SO3, as_layout
from .rotation import orth_error, proj_so3
from .sphere import proj_s2

NORMALITY_TOL = 8 * EPS_M


def normality_error(d):
    """``|1 - |d||`` for directors ``d`` of shape ``(..., 3)``."""
    return np.abs(1.0 - np.linalg.norm(np.asarray(d, dtype=float), axis=-1))


def check_director(d):
    """Return ``d`` as a float array after checking the unit-norm certificate."""
    d = np.asarray(d, dtype=float)
    if d.shape[-1:] != (3,) or not np.isfinite(d).all():
        raise ValidationError("director must be a finite 3-vector")
    err = np.max(normality_error(d), initial=0.0)
    if err > NORMALITY_TOL:
        raise ValidationError(f"director normality error {err:.3g} exceeds 8 eps")
    return d


def check_rotation(R):
    """Return ``R`` as a float array after checking orthogonality and orientation."""
    R = np.asarray(R, dtype=float)
    if R.shape[-2:] != (3, 3) or not np.isfinite(R).all():
        raise ValidationError("rotation must be a finite 3x3 matrix")
    err = np.max(orth_error(R), initial=0.0)
    if err > EPS_O3:
        raise ValidationError(f"rotation orthogonality error {err:.3g} exceeds 8 eps")
    if np.any(np.linalg.det(R) <= 0):
        raise ValidationError("rotation has nonpositive determinant")
    return R


def check_snapshots(X, layout, project=False):
    """Validate a trajectory array against a layout.

    Parameters
    ----------
    X : array_like, shape (n_samples, layout.point_dim)
        One snapshot per row. A single 1-d row is accepted.
    layout : Layout or str
    project : bool, default=False
        Replace S2/SO3 components that break their invariant by their
        orthogonal projection instead of raising.

    Returns
    -------
    X : ndarray, shape (n_samples, point_dim)
        Validated (and possibly projected) copy.
    n_projected : int
        Number of components that were projected.
    """
    layout = as_layout(layout)
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[None, :]
    try:
        X = check_array(X, dtype=np.float64, copy=True, ensure_all_finite=True)
    except ValueError as exc:
        raise ValidationError(str(exc)) from None
    if X.shape[1] != layout.point_dim:
        raise ValidationError(
            f"snapshot width {X.shape[1]} does not match layout '{layout}' "
            f"({layout.point_dim} floats)")

    n_projected = 0
    for tag, sl in zip(layout.components, layout.point_slices()):
        if tag == R3:
            continue
        block = X[:, sl]
        if tag == S2:
            bad = normality_error(block) > NORMALITY_TOL
            if bad.any():
                if not project:
                    raise ValidationError(f"{bad.sum()} director(s) violate the normality bound")
                block[bad] = proj_s2(block[bad])
        elif tag == SO3:
            mats = block.reshape(-1, 3, 3)
            bad = (orth_error(mats) > EPS_O3) | (np.linalg.det(mats) <= 0)
            if bad.any():
                if not project:
                    raise ValidationError(f"{bad.sum()} rotation(s) violate the orthogonality bound")
                try:
                    mats[bad] = proj_so3(mats[bad])
                except SingularityError as exc:
                    raise ValidationError(f"cannot project to SO(3): {exc}") from None
                block[:] = mats.reshape(-1, 9)
        X[:, sl] = block
        n_projected += int(bad.sum())
    return X, n_projected
