"""Error statistics: lift-and-project errors, orthogonality and normality
errors, dyadic histograms and summary tables.
"""

from dataclasses import dataclass

import numpy as np

from .lift import reconstruct_points
from .linalg import EPS_M
from .manifold import R3, S2, SO3, as_layout
from .rotation import exp_so3, geodesic_dist_so3, log_so3, orth_error
from .sphere import exp_s2, geodesic_dist_s2, log_s2
from .validation import normality_error

LARGE_ERROR = 2.0**12 * EPS_M
MAX_BIN_EXPONENT = 41


@dataclass
class ErrorRecords:
    """Columnar error records: one row per (sample, component) pair."""

    index: np.ndarray
    component: np.ndarray
    theta: np.ndarray
    error: np.ndarray

    def __len__(self):
        return self.error.shape[0]

    @classmethod
    def empty(cls):
        z = np.zeros(0)
        return cls(z.astype(int), z.astype(int), z, z)

    @classmethod
    def concat(cls, records):
        records = list(records)
        if not records:
            return cls.empty()
        return cls(*(np.concatenate([getattr(r, f) for r in records])
                     for f in ("index", "component", "theta", "error")))


def _max_abs(a, b):
    diff = np.abs(np.asarray(a) - np.asarray(b))
    return diff.reshape(diff.shape[0], -1).max(axis=1)


def _component_angles(tag, base, x):
    if tag == S2:
        return geodesic_dist_s2(base, x)
    return geodesic_dist_so3(base, x)


def lift_project_error(X, lift):
    """``max |exp(lift(x_i)) - x_i|`` per sample and curved component.

    The recorded angle is the geodesic distance of the sample from the base.
    """
    layout = lift.layout
    X = np.asarray(X, dtype=float)
    if X.shape[0] != len(lift):
        raise ValueError("trajectory and lift have different lengths")
    Xr = reconstruct_points(lift.base, lift.tangents, layout)
    orig, rec, base = layout.split(X), layout.split(Xr), layout.split(lift.base)
    out = []
    idx = np.arange(X.shape[0])
    for j in layout.curved:
        tag = layout.components[j]
        out.append(ErrorRecords(idx, np.full_like(idx, j),
                                _component_angles(tag, base[j], orig[j]),
                                _max_abs(rec[j], orig[j])))
    return ErrorRecords.concat(out)


def log_project_error(X, layout, base=None):
    """``max |exp(log(x_i)) - x_i|`` with the principal logarithm at ``base``.

    On SO3 the error is measured for the relative rotation ``B^T R_i``.
    ``base`` defaults to the first sample.
    """
    layout = as_layout(layout)
    X = np.asarray(X, dtype=float)
    base = X[0] if base is None else np.asarray(base, dtype=float)
    parts, base_parts = layout.split(X), layout.split(base)
    idx = np.arange(X.shape[0])
    out = []
    for j in layout.curved:
        tag, b, x = layout.components[j], base_parts[j], parts[j]
        if tag == S2:
            err = _max_abs(exp_s2(b, log_s2(b, x)), x)
            theta = geodesic_dist_s2(b, x)
        else:
            rel = b.T @ x
            aa = log_so3(rel)
            err = _max_abs(exp_so3(aa.vector), rel)
            theta = aa.theta
        out.append(ErrorRecords(idx, np.full_like(idx, j), theta, err))
    return ErrorRecords.concat(out)


def orth_normality_errors(X, layout):
    """Orthogonality error of SO3 components and ``|1 - |d||`` of S2 components.

    Angles are rotation angles for SO3 and the distance from the first
    sample for S2.
    """
    layout = as_layout(layout)
    X = np.atleast_2d(np.asarray(X, dtype=float))
    idx = np.arange(X.shape[0])
    out = []
    for j, (tag, x) in enumerate(zip(layout.components, layout.split(X))):
        if tag == R3:
            continue
        if tag == SO3:
            err = orth_error(x)
            theta = log_so3(x).theta
        else:
            err = normality_error(x)
            unit = x / np.linalg.norm(x, axis=-1, keepdims=True)
            theta = geodesic_dist_s2(unit[0], unit)
        out.append(ErrorRecords(idx, np.full_like(idx, j), np.asarray(theta, dtype=float), err))
    return ErrorRecords.concat(out)


@dataclass
class BinHistogram:
    """Counts of errors in dyadic bins.

    Bin 0 holds exact zeros, bin 1 is ``(0, eps/2]``, then
    ``(2**(j-1) eps, 2**j eps]`` for ``j = 0..41`` and a final overflow bin.
    """

    lo: np.ndarray
    hi: np.ndarray
    counts: np.ndarray

    @property
    def total(self):
        return int(self.counts.sum())

    def rows(self):
        return list(zip(self.lo.tolist(), self.hi.tolist(), self.counts.tolist()))


def bin_edges():
    exps = np.arange(0, MAX_BIN_EXPONENT + 1)
    lo = np.concatenate([[0.0, 0.0], 2.0 ** (exps - 1) * EPS_M, [2.0**MAX_BIN_EXPONENT * EPS_M]])
    hi = np.concatenate([[0.0, 0.5 * EPS_M], 2.0**exps * EPS_M, [np.inf]])
    return lo, hi


def dyadic_bin(errors):
    """Bin number ``j`` with ``2**(j-1) eps < e <= 2**j eps`` for positive errors."""
    mant, expo = np.frexp(np.asarray(errors, dtype=float) / EPS_M)
    return expo - (mant == 0.5)


def bin_counts(errors):
    """Histogram of nonnegative errors (array or :class:`ErrorRecords`)."""
    if isinstance(errors, ErrorRecords):
        errors = errors.error
    e = np.asarray(errors, dtype=float).ravel()
    if np.isnan(e).any() or np.any(e < 0):
        raise ValueError("errors must be nonnegative numbers")
    lo, hi = bin_edges()
    counts = np.zeros(lo.shape[0], dtype=np.int64)
    counts[0] = np.count_nonzero(e == 0)
    pos = e[e > 0]
    j = np.where(np.isinf(pos), MAX_BIN_EXPONENT + 1, dyadic_bin(pos))
    counts[1] = np.count_nonzero(j <= -1)
    inside = (j >= 0) & (j <= MAX_BIN_EXPONENT)
    counts[2:-1] = np.bincount(j[inside], minlength=MAX_BIN_EXPONENT + 1)
    counts[-1] = np.count_nonzero(j > MAX_BIN_EXPONENT)
    return BinHistogram(lo, hi, counts)


@dataclass
class ErrorSummary:
    count: int
    max_error: float
    large_count: int

    @property
    def large_fraction(self):
        return self.large_count / self.count if self.count else 0.0

    def format(self):
        return (f"records={self.count} max={self.max_error:.3g} "
                f"large(>2^12 eps)={self.large_count} ({100 * self.large_fraction:.2f}%)")


def summarize(errors):
    """Maximum error and count of errors above ``2**12 eps``."""
    if isinstance(errors, ErrorRecords):
        errors = errors.error
    e = np.asarray(errors, dtype=float).ravel()
    if e.size == 0:
        return ErrorSummary(0, 0.0, 0)
    return ErrorSummary(int(e.size), float(e.max()), int(np.count_nonzero(e > LARGE_ERROR)))
