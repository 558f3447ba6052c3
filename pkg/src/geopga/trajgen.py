"""Deterministic synthetic trajectories on S2 and SO3.

All randomness comes from a Philox-4x64 counter-based bit generator keyed
directly with the 64-bit seed (``numpy.random.Philox(key=seed)``, counter
starting at zero), wrapped in a :class:`numpy.random.Generator`. The same seed
therefore gives bit-identical output on every platform numpy supports.

Sample counts: ``geodesic``, ``winding`` and ``noisy`` trajectories take
``n`` steps and return ``n + 1`` samples at angles ``angle * i / n``;
``pendulum`` and ``random-walk`` return exactly ``n`` samples.
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import ValidationError
from .linalg import EPS_M
from .manifold import S2, SO3
from .rotation import exp_so3, reorthogonalize
from .sphere import exp_s2

KINDS = ("geodesic", "winding", "pendulum", "random-walk", "noisy")
_E = np.eye(3)


def make_rng(seed):
    """Philox generator keyed with the 64-bit ``seed``."""
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ValidationError("seed must be a 64-bit unsigned integer")
    return np.random.Generator(np.random.Philox(key=seed))


def _unit(w, what="axis"):
    w = np.asarray(w, dtype=float).reshape(-1)
    if w.shape != (3,) or not np.isfinite(w).all():
        raise ValidationError(f"{what} must be a finite 3-vector")
    nw = np.linalg.norm(w)
    if nw <= EPS_M:
        raise ValidationError(f"{what} must be nonzero")
    return w / nw


@dataclass(frozen=True)
class GenSpec:
    """Parameters of a synthetic trajectory.

    Attributes
    ----------
    kind : str
        One of ``geodesic``, ``winding``, ``pendulum``, ``random-walk``, ``noisy``.
    manifold : str
        ``'S2'`` or ``'SO3'``.
    n : int
        Number of steps (geodesic, winding, noisy) or samples (pendulum,
        random-walk); at least 1.
    axis : tuple of float
        Rotation axis, also the rotation axis of great circles on S2.
    angle : float
        Total angle of geodesic, winding and noisy trajectories.
    amplitude, omega, dt : float
        Pendulum angle ``amplitude * cos(omega * i * dt)``.
    step : float
        Standard deviation of random-walk steps per tangent coordinate.
    noise : float
        Half-width of the uniform entrywise perturbation of ``noisy``.
    seed : int
        64-bit seed.
    """

    kind: str = "winding"
    manifold: str = SO3
    n: int = 100
    axis: tuple = (0.0, 0.0, 1.0)
    angle: float = np.pi
    amplitude: float = 1.0
    omega: float = 1.0
    dt: float = 0.01
    step: float = 0.1
    noise: float = 1e-6
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"unknown trajectory kind {self.kind!r}; expected {KINDS}")
        if self.manifold not in (S2, SO3):
            raise ValidationError("manifold must be 'S2' or 'SO3'")
        if int(self.n) != self.n or self.n < 1:
            raise ValidationError("n must be a positive integer")
        object.__setattr__(self, "axis", tuple(float(a) for a in _unit(self.axis)))
        for name in ("angle", "amplitude", "omega", "dt", "step", "noise"):
            if not np.isfinite(getattr(self, name)):
                raise ValidationError(f"{name} must be finite")
        if self.step < 0 or self.noise < 0:
            raise ValidationError("step and noise scales must be nonnegative")
        make_rng(self.seed)

    @property
    def layout(self):
        return self.manifold


def random_directors(rng, count):
    """``count`` uniformly distributed unit vectors."""
    g = rng.standard_normal((count, 3))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def _haar(rng, count):
    # unit quaternion (w, x, y, z) -> rotation vector -> exp_so3
    q = rng.standard_normal((count, 4))
    q /= np.linalg.norm(q, axis=1, keepdims=True)
    q *= np.where(q[:, :1] < 0, -1.0, 1.0)
    nv = np.linalg.norm(q[:, 1:], axis=1)
    theta = 2 * np.arctan2(nv, q[:, 0])
    u = q[:, 1:] / np.where(nv == 0, 1.0, nv)[:, None]
    return exp_so3(theta[:, None] * u)


def haar_rotation(seed, count):
    """``count`` Haar-distributed rotations, shape ``(count, 3, 3)``.

    A Gaussian 4-vector normalized to a unit quaternion is uniform on S^3,
    which makes the rotation it represents uniform on SO(3).
    """
    if int(count) < 1:
        raise ValidationError("count must be at least 1")
    return _haar(make_rng(seed), int(count))


def _start_director(w):
    # first coordinate axis not too close to w, made orthogonal to it
    for e in (_E[2], _E[0], _E[1]):
        if abs(e @ w) < 0.9:
            d = e - (e @ w) * w
            return d / np.linalg.norm(d)
    raise AssertionError("unreachable")


def _orthogonal_director(d, w):
    d = d - (d @ w) * w
    nd = np.linalg.norm(d)
    if nd < 1e-3:
        return _start_director(w)
    return d / nd


def _circle(d0, w, angles):
    # great circle through d0 in the plane orthogonal to w
    angles = np.asarray(angles, dtype=float)[:, None]
    return np.cos(angles) * d0 + np.sin(angles) * np.cross(w, d0)


def _about_axis(base, w, angles):
    R = exp_so3(np.asarray(angles, dtype=float)[:, None] * w)
    if base is None:
        return R.reshape(-1, 9)
    return reorthogonalize(base @ R).reshape(-1, 9)


def _steps(spec):
    return spec.angle * np.arange(spec.n + 1) / spec.n


def _geodesic(spec, rng, random_start):
    w = np.asarray(spec.axis)
    angles = _steps(spec)
    if spec.manifold == SO3:
        base = _haar(rng, 1)[0] if random_start else None
        return _about_axis(base, w, angles)
    d0 = _orthogonal_director(random_directors(rng, 1)[0], w) if random_start else _start_director(w)
    return _circle(d0, w, angles)


def _pendulum(spec):
    w = np.asarray(spec.axis)
    t = np.arange(spec.n) * spec.dt
    angles = spec.amplitude * np.cos(spec.omega * t)
    if spec.manifold == SO3:
        return _about_axis(None, w, angles)
    return _circle(_start_director(w), w, angles)


def _random_walk(spec, rng):
    n = spec.n
    if spec.manifold == SO3:
        out = np.empty((n, 3, 3))
        out[0] = _haar(rng, 1)[0]
        steps = exp_so3(spec.step * rng.standard_normal((n - 1, 3)))
        for i in range(1, n):
            out[i] = reorthogonalize(out[i - 1] @ steps[i - 1])
        return out.reshape(n, 9)
    out = np.empty((n, 3))
    out[0] = random_directors(rng, 1)[0]
    g = spec.step * rng.standard_normal((n - 1, 3))
    for i in range(1, n):
        d = out[i - 1]
        v = g[i - 1] - (g[i - 1] @ d) * d
        e = exp_s2(d, v)
        out[i] = e / np.linalg.norm(e)
    return out


def generate(spec):
    """Generate the trajectory described by ``spec``.

    Returns
    -------
    X : ndarray, shape (n_samples, 3) for S2 or (n_samples, 9) for SO3
        One snapshot per row, SO3 matrices row-major.
    """
    rng = make_rng(spec.seed)
    if spec.kind == "winding":
        return _geodesic(spec, rng, random_start=False)
    if spec.kind == "geodesic":
        return _geodesic(spec, rng, random_start=True)
    if spec.kind == "pendulum":
        return _pendulum(spec)
    if spec.kind == "random-walk":
        return _random_walk(spec, rng)
    X = _geodesic(spec, rng, random_start=True)
    return X + rng.uniform(-spec.noise, spec.noise, size=X.shape)
