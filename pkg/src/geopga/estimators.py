"""scikit-learn style estimators for principal geodesic analysis."""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .exceptions import ValidationError
from .lift import lift_trajectory, log_points, reconstruct_points
from .manifold import as_layout
from .pga import (
    MeanConfig,
    build_snapshot_matrix,
    intrinsic_mean,
    lift_at_mean,
    pga_fit,
    reconstruct_trajectory,
)
from .validation import check_snapshots


def _split_lengths(X, lengths):
    lengths = np.asarray(lengths, dtype=int).ravel()
    if lengths.size == 0 or np.any(lengths < 1) or lengths.sum() != X.shape[0]:
        raise ValidationError("lengths must be positive and add up to the number of samples")
    return np.split(X, np.cumsum(lengths)[:-1])


class PrincipalGeodesicAnalysis(TransformerMixin, BaseEstimator):
    """Principal geodesic analysis of trajectories on a product manifold.

    A single trajectory is lifted into the tangent space at its first
    sample, whose (zero) lift is left out of the snapshot matrix. Several
    trajectories, given through ``lengths``, are lifted at their common
    intrinsic mean with all samples kept.

    Parameters
    ----------
    layout : str or Layout, default='SO3'
        Component tags of one snapshot row, e.g. ``'R3*2 SO3*2'``.
    n_components : int, optional
        Number of principal geodesic modes kept; defaults to the numerical
        rank of the snapshot matrix.
    scheme : {'north2', 'ambient3'}, default='north2'
        Tangent coordinates of S2 components.
    alpha, max_iter, tol
        Intrinsic-mean gradient descent settings (multi-trajectory fits).
    project : bool, default=False
        Project snapshots that violate the manifold invariants instead of
        rejecting them.

    Attributes
    ----------
    base_ : ndarray of shape (point_dim,)
    components_ : ndarray of shape (n_components_, tangent_dim)
        Left singular vectors of the snapshot matrix, one per row.
    singular_values_ : ndarray of shape (n_components_,)
    all_singular_values_ : ndarray
        Full singular spectrum of the snapshot matrix.
    rank_ : int
    lift_ : LiftedTrajectory
    model_ : PgaModel
    mean_result_ : MeanResult or None
    """

    def __init__(self, layout="SO3", n_components=None, scheme="north2",
                 alpha=1.0, max_iter=200, tol=1e-12, project=False):
        self.layout = layout
        self.n_components = n_components
        self.scheme = scheme
        self.alpha = alpha
        self.max_iter = max_iter
        self.tol = tol
        self.project = project

    def _layout(self):
        return as_layout(self.layout, self.scheme)

    def fit(self, X, y=None, lengths=None):
        """Lift and decompose the trajectory (or trajectories) ``X``.

        Parameters
        ----------
        X : array_like of shape (n_samples, point_dim)
        y : ignored
        lengths : sequence of int, optional
            Sample counts of consecutive trajectories stacked in ``X``.
        """
        layout = self._layout()
        X, _ = check_snapshots(X, layout, project=self.project)
        if lengths is None:
            lift = lift_trajectory(X, layout)
            Y = build_snapshot_matrix(lift, drop_first=True)
            self.mean_result_ = None
        else:
            parts = _split_lengths(X, lengths)
            cfg = MeanConfig(self.alpha, self.max_iter, self.tol)
            self.mean_result_ = intrinsic_mean(X, layout, cfg)
            lift = lift_at_mean(parts, layout, self.mean_result_.mean)
            Y = build_snapshot_matrix(lift, drop_first=False)
        model = pga_fit(Y, lift.base, layout)
        p = model.rank if self.n_components is None else int(self.n_components)
        if not 0 <= p <= model.rank:
            raise ValidationError(
                f"n_components={p} exceeds the numerical rank {model.rank}")

        self.lift_ = lift
        self.model_ = model
        self.base_ = lift.base
        self.rank_ = model.rank
        self.n_components_ = p
        self.components_ = model.U[:, :p].T
        self.singular_values_ = model.singular_values[:p]
        self.all_singular_values_ = model.all_singular_values
        return self

    def transform(self, X):
        """Scores of a trajectory on the principal modes, shape (n_samples, n_components_).

        The trajectory is lifted continuously at ``base_``, starting from
        the principal logarithm of its first sample.
        """
        check_is_fitted(self, "model_")
        lift = lift_trajectory(X, self.model_.layout, base=self.base_)
        return lift.tangents @ self.components_.T

    def inverse_transform(self, scores):
        """Map scores back to snapshots with the exponential at ``base_``."""
        check_is_fitted(self, "model_")
        scores = np.atleast_2d(np.asarray(scores, dtype=float))
        if scores.shape[1] != self.n_components_:
            raise ValidationError(f"expected {self.n_components_} score columns")
        return reconstruct_points(self.base_, scores @ self.components_, self.model_.layout)

    def reconstruct(self, n_components=None):
        """Rank-``n_components`` reconstruction of the fitted snapshots."""
        check_is_fitted(self, "model_")
        p = self.n_components_ if n_components is None else n_components
        return reconstruct_trajectory(self.model_, p)


class IntrinsicMean(TransformerMixin, BaseEstimator):
    """Intrinsic mean of snapshots; transforms to logarithms at the mean.

    Attributes
    ----------
    mean_ : ndarray of shape (point_dim,)
    n_iter_ : int
    grad_norm_ : float
    """

    def __init__(self, layout="SO3", scheme="north2", alpha=1.0, max_iter=200, tol=1e-12):
        self.layout = layout
        self.scheme = scheme
        self.alpha = alpha
        self.max_iter = max_iter
        self.tol = tol

    def fit(self, X, y=None):
        layout = as_layout(self.layout, self.scheme)
        res = intrinsic_mean(X, layout, MeanConfig(self.alpha, self.max_iter, self.tol))
        self.mean_ = res.mean
        self.n_iter_ = res.n_iter
        self.grad_norm_ = res.grad_norm
        return self

    def transform(self, X):
        """Principal logarithms at ``mean_``, shape (n_samples, tangent_dim)."""
        check_is_fitted(self, "mean_")
        layout = as_layout(self.layout, self.scheme)
        X, _ = check_snapshots(X, layout)
        return log_points(self.mean_, X, layout)

    def inverse_transform(self, T):
        check_is_fitted(self, "mean_")
        return reconstruct_points(self.mean_, T, as_layout(self.layout, self.scheme))
