"""Principal geodesic analysis in a tangent space and the intrinsic mean."""

from dataclasses import dataclass, field

import numpy as np

from .exceptions import ConvergenceError, SingularityError, ValidationError
from .linalg import EPS_M, thin_svd
from .lift import LiftedTrajectory, lift_trajectory, reconstruct_points
from .manifold import S2, SO3, Layout, as_layout
from .rotation import exp_so3, log_so3, reorthogonalize
from .sphere import exp_s2, geodesic_dist_s2, log_s2
from .validation import check_snapshots

RANK_TOL = 64 * EPS_M
"""Singular values below ``RANK_TOL * sigma_1`` count as zero."""

SINGULAR_MARGIN = 1e-8


def build_snapshot_matrix(lift, drop_first=True):
    """Stack the lifted tangent vectors as columns of an ``m x n`` matrix.

    With ``drop_first`` (single-trajectory mode) the lift of the base sample,
    which is zero by construction, is left out.
    """
    T = lift.tangents[1:] if drop_first else lift.tangents
    return np.ascontiguousarray(T.T)


@dataclass
class PgaModel:
    """Truncated-rank SVD of a snapshot matrix plus the data to map back.

    ``U`` (m, r), ``singular_values`` (r,) and ``V`` (n, r) keep only the
    triplets above the rank tolerance; ``all_singular_values`` keeps the full
    spectrum for diagnostics.
    """

    base: np.ndarray
    layout: Layout
    U: np.ndarray
    singular_values: np.ndarray
    V: np.ndarray
    all_singular_values: np.ndarray = field(default_factory=lambda: np.zeros(0))

    @property
    def rank(self):
        return self.singular_values.shape[0]

    @property
    def n_snapshots(self):
        return self.V.shape[0]

    def singular_value_ratios(self):
        """``sigma_j / sigma_1`` over the full spectrum (empty for a zero matrix)."""
        s = self.all_singular_values
        if s.size == 0 or s[0] == 0:
            return np.zeros(0)
        return s / s[0]


def pga_fit(Y, base, layout):
    """Fit the PGA model ``Y = sum_j sigma_j u_j v_j^T`` of a snapshot matrix."""
    layout = as_layout(layout)
    Y = np.asarray(Y, dtype=float)
    if Y.ndim != 2 or Y.shape[0] != layout.tangent_dim:
        raise ValidationError(
            f"snapshot matrix must have {layout.tangent_dim} rows, got shape {Y.shape}")
    m, n = Y.shape
    if n == 0:
        return PgaModel(np.asarray(base, dtype=float), layout, np.zeros((m, 0)),
                        np.zeros(0), np.zeros((0, 0)))
    U, s, V = thin_svd(Y)
    r = int(np.sum(s > RANK_TOL * s[0])) if s[0] > 0 else 0
    return PgaModel(
        base=np.asarray(base, dtype=float),
        layout=layout,
        U=U[:, :r],
        singular_values=s[:r],
        V=V[:, :r],
        all_singular_values=s,
    )


def truncate(model, p):
    """Best rank-``p`` approximation ``Y_p = U_p diag(sigma_p) V_p^T``."""
    if not 0 <= p <= model.rank:
        raise ValidationError(f"rank {p} outside [0, {model.rank}]")
    return (model.U[:, :p] * model.singular_values[:p]) @ model.V[:, :p].T


def reconstruct_trajectory(model, p):
    """Map the columns of the rank-``p`` approximation back to the manifold.

    Returns one snapshot row per column of the snapshot matrix.
    """
    Yp = truncate(model, p)
    if Yp.shape[1] == 0:
        return np.zeros((0, model.layout.point_dim))
    return reconstruct_points(model.base, Yp.T, model.layout)


@dataclass
class MeanConfig:
    """Settings of the intrinsic-mean gradient descent."""

    alpha: float = 1.0
    max_iter: int = 200
    tol: float = 1e-12

    def __post_init__(self):
        if not 0 < self.alpha < 2:
            raise ValidationError("step length alpha must lie in (0, 2)")
        if self.tol <= 0:
            raise ValidationError("tolerance must be positive")
        if self.max_iter < 0:
            raise ValidationError("max_iter must be nonnegative")


@dataclass
class MeanResult:
    mean: np.ndarray
    n_iter: int
    grad_norm: float


def _mean_gradient(mean_parts, samples, layout):
    """Average principal logarithm of all samples at the current iterate."""
    grads = []
    for tag, m, x in zip(layout.components, mean_parts, samples):
        if tag == S2:
            if np.any(geodesic_dist_s2(m, x) >= np.pi - SINGULAR_MARGIN):
                raise SingularityError("a director is antipodal to the mean iterate")
            g = log_s2(m, x)
        elif tag == SO3:
            aa = log_so3(np.swapaxes(m, -1, -2)[None] @ x)
            if np.any(aa.theta >= np.pi - SINGULAR_MARGIN):
                raise SingularityError("a rotation is a half turn away from the mean iterate")
            g = aa.vector
        else:
            g = x - m
        grads.append(g.sum(axis=0) / x.shape[0])
    return grads


def intrinsic_mean(X, layout, config=None):
    """Intrinsic (Frechet) mean by fixed-step gradient descent.

    Starts from the first sample and iterates
    ``x <- exp_x(alpha / n * sum_i log_x(x_i))`` (``R <- R exp(...)`` on SO3)
    until the averaged logarithm has norm ``<= tol``.

    Raises
    ------
    SingularityError
        If a sample sits within ``1e-8`` of the cut locus of an iterate.
    ConvergenceError
        If the tolerance is not met within ``max_iter`` updates.
    """
    layout = as_layout(layout)
    cfg = config or MeanConfig()
    X, _ = check_snapshots(X, layout)
    samples = layout.split(X)
    mean = [s[0].copy() for s in samples]

    for it in range(cfg.max_iter + 1):
        grads = _mean_gradient(mean, samples, layout)
        grad_norm = float(np.sqrt(sum(float(g @ g) for g in grads)))
        if grad_norm <= cfg.tol:
            return MeanResult(layout.join(mean), it, grad_norm)
        if it == cfg.max_iter:
            break
        for j, (tag, g) in enumerate(zip(layout.components, grads)):
            step = cfg.alpha * g
            if tag == S2:
                mean[j] = exp_s2(mean[j], step)
            elif tag == SO3:
                mean[j] = reorthogonalize(mean[j] @ exp_so3(step))
            else:
                mean[j] = mean[j] + step
    raise ConvergenceError(
        f"intrinsic mean did not converge in {cfg.max_iter} iterations "
        f"(gradient norm {grad_norm:.3g} > {cfg.tol:.3g})")


def lift_at_mean(trajectories, layout, mean):
    """Lift several trajectories at a common base point (initial points kept)."""
    lifts = [lift_trajectory(X, layout, base=mean) for X in trajectories]
    tangents = np.concatenate([l.tangents for l in lifts], axis=0)
    branches = np.concatenate([l.branches for l in lifts], axis=0)
    return LiftedTrajectory(base=np.asarray(mean, dtype=float), tangents=tangents,
                            branches=branches, layout=as_layout(layout))

