"""Lifting of discrete trajectories into a single tangent space."""

from dataclasses import dataclass

import numpy as np

from .branches import branch_index
from .exceptions import IllPosedLiftError
from .linalg import EPS_M
from .manifold import NORTH2, R3, S2, SO3, Layout, as_layout
from .rotation import exp_so3, geodesic_dist_so3, lift_map_so3, rotation_vector
from .sphere import (
    exp_s2,
    geodesic_dist_s2,
    lift_map_s2,
    log_s2,
    north_rotation_coords,
    north_rotation_vector,
)
from .validation import check_snapshots

TAU_IDENTICAL = 8 * EPS_M
"""Consecutive snapshots closer than this are treated as identical."""


@dataclass
class LiftedTrajectory:
    """Tangent-space image of a trajectory.

    Attributes
    ----------
    base : ndarray, shape (point_dim,)
        Base point of the tangent space.
    tangents : ndarray, shape (n_samples, tangent_dim)
        Tangent coordinates of every sample, in layout order.
    branches : ndarray of int, shape (n_samples, n_curved)
        Shell/annulus index of every S2 and SO3 component.
    layout : Layout
    """

    base: np.ndarray
    tangents: np.ndarray
    branches: np.ndarray
    layout: Layout

    def __len__(self):
        return self.tangents.shape[0]

    def crossings(self):
        """Number of branch changes per curved component."""
        if len(self) < 2:
            return np.zeros(self.branches.shape[1], dtype=int)
        return np.abs(np.diff(self.branches, axis=0)).sum(axis=0)


def snapshot_distance(x, y, layout):
    """Largest component-wise distance between two snapshot rows."""
    dist = 0.0
    for tag, a, b in zip(layout.components, layout.split(x), layout.split(y)):
        if tag == S2:
            d = geodesic_dist_s2(a, b)
        elif tag == SO3:
            d = geodesic_dist_so3(a, b)
        else:
            d = np.linalg.norm(a - b)
        dist = max(dist, float(d))
    return dist


def _to_coords(tag, base, v, layout):
    if tag == S2 and layout.scheme == NORTH2:
        return north_rotation_coords(base, v)
    return v


def _from_coords(tag, base, t, layout):
    if tag == S2 and layout.scheme == NORTH2:
        return north_rotation_vector(base, t)
    return t


def lift_trajectory(X, layout, base=None):
    """Lift a time-ordered trajectory into the tangent space at one point.

    Each sample is lifted from the previous lift so that the result is a
    continuous curve through all branches of the logarithm; samples closer
    than ``8 eps`` to their predecessor repeat the previous lift.

    Parameters
    ----------
    X : array_like, shape (n_samples, layout.point_dim)
    layout : Layout or str
    base : array_like, shape (point_dim,), optional
        Base point. Defaults to the first sample, whose lift is then zero;
        otherwise the first sample is lifted with the principal logarithm.

    Returns
    -------
    LiftedTrajectory

    Raises
    ------
    IllPosedLiftError
        If consecutive samples of an S2 or SO3 component are at geodesic
        distance pi or more.
    """
    layout = as_layout(layout)
    X, _ = check_snapshots(X, layout)
    if base is None:
        base = X[0].copy()
    else:
        base, _ = check_snapshots(base, layout)
        base = base[0]

    comps = layout.components
    base_parts = layout.split(base)
    samples = layout.split(X)
    n = X.shape[0]
    ambient = [np.zeros((n, 3)) for _ in comps]

    # first sample: principal logarithm at the base (zero when it is the base)
    for j, tag in enumerate(comps):
        b, x0 = base_parts[j], samples[j][0]
        if tag == S2:
            ambient[j][0] = log_s2(b, x0)
        elif tag == SO3:
            ambient[j][0] = rotation_vector(b.T @ x0)
        else:
            ambient[j][0] = x0 - b

    for i in range(1, n):
        if snapshot_distance(X[i], X[i - 1], layout) <= TAU_IDENTICAL:
            for j in range(len(comps)):
                ambient[j][i] = ambient[j][i - 1]
            continue
        for j, tag in enumerate(comps):
            b, x = base_parts[j], samples[j]
            prev = ambient[j][i - 1]
            if tag == S2:
                if geodesic_dist_s2(x[i - 1], x[i]) >= np.pi:
                    raise IllPosedLiftError(
                        f"samples {i - 1} and {i} of component {j} are antipodal")
                ambient[j][i] = lift_map_s2(b, prev, x[i])
            elif tag == SO3:
                if geodesic_dist_so3(x[i - 1], x[i]) >= np.pi:
                    raise IllPosedLiftError(
                        f"samples {i - 1} and {i} of component {j} are a half turn apart")
                ambient[j][i] = lift_map_so3(prev, b.T @ x[i])
            else:
                ambient[j][i] = x[i] - b

    tangents = np.concatenate(
        [_to_coords(tag, base_parts[j], ambient[j], layout) for j, tag in enumerate(comps)],
        axis=1)
    branches = np.stack(
        [branch_index(np.linalg.norm(ambient[j], axis=1)) for j in layout.curved], axis=1
    ) if layout.curved else np.zeros((n, 0), dtype=int)
    return LiftedTrajectory(base=base, tangents=tangents, branches=branches.reshape(n, -1),
                            layout=layout)


def reconstruct_points(base, tangents, layout):
    """Map tangent coordinates back to the manifold with the exponential at ``base``.

    Parameters
    ----------
    base : array_like, shape (point_dim,)
    tangents : array_like, shape (n, tangent_dim) or (tangent_dim,)

    Returns
    -------
    X : ndarray, shape (n, point_dim) or (point_dim,)
    """
    layout = as_layout(layout)
    base = np.asarray(base, dtype=float)
    T = np.asarray(tangents, dtype=float)
    single = T.ndim == 1
    T = np.atleast_2d(T)
    parts = []
    for tag, b, sl in zip(layout.components, layout.split(base), layout.tangent_slices()):
        t = _from_coords(tag, b, T[:, sl], layout)
        if tag == S2:
            parts.append(exp_s2(b, t))
        elif tag == SO3:
            parts.append(b @ exp_so3(t))
        else:
            parts.append(b + t)
    X = layout.join(parts)
    return X[0] if single else X


def reconstruct_point(base, tangent, layout):
    """Single-point version of :func:`reconstruct_points`."""
    return reconstruct_points(base, np.asarray(tangent, dtype=float).reshape(-1), layout)


def log_points(base, X, layout):
    """Principal logarithm of every snapshot at ``base`` in tangent coordinates.

    Unlike :func:`lift_trajectory` the samples are treated independently, so
    the result stays on the principal branch.
    """
    layout = as_layout(layout)
    base = np.asarray(base, dtype=float)
    X = np.atleast_2d(np.asarray(X, dtype=float))
    out = []
    for tag, b, x in zip(layout.components, layout.split(base), layout.split(X)):
        if tag == S2:
            v = log_s2(b, x)
        elif tag == SO3:
            v = rotation_vector(b.T @ x)
        else:
            v = x - b
        out.append(_to_coords(tag, b, v, layout))
    return np.concatenate(out, axis=1)
