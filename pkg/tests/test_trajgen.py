import math

import numpy as np
import pytest

from geopga.exceptions import ValidationError
from geopga.lift import lift_trajectory
from geopga.rotation import exp_so3, orth_error, rotation_vector
from geopga.trajgen import GenSpec, generate, haar_rotation, make_rng
from geopga.validation import normality_error

EPS = 2.0**-52
PI = math.pi


def test_winding_periodicity_example():
    X = generate(GenSpec("winding", "SO3", 1000, axis=(0, 0, 1), angle=5 * PI, seed=7))
    assert X.shape == (1001, 9)
    np.testing.assert_allclose(X[500].reshape(3, 3), exp_so3([0, 0, 0.5 * PI]), atol=1e-14)


def test_pendulum_example():
    X = generate(GenSpec("pendulum", "SO3", 3, amplitude=1.0, omega=1.0, dt=PI / 2))
    n = rotation_vector(X.reshape(-1, 3, 3))
    np.testing.assert_allclose(n, [[0, 0, 1], [0, 0, 0], [0, 0, -1]], atol=1e-15)
    S = generate(GenSpec("pendulum", "S2", 3, amplitude=1.0, omega=1.0, dt=PI / 2))
    angles = np.arctan2(S[:, 1], S[:, 0])
    np.testing.assert_allclose(angles, [1, 0, -1], atol=1e-15)


@pytest.mark.parametrize("kind", ["geodesic", "winding", "pendulum", "random-walk", "noisy"])
@pytest.mark.parametrize("manifold", ["S2", "SO3"])
def test_determinism_and_invariants(kind, manifold):
    spec = GenSpec(kind, manifold, 50, angle=2.0, seed=2**63 + 5)
    X = generate(spec)
    assert np.array_equal(X, generate(spec))
    assert not np.array_equal(X, generate(GenSpec(kind, manifold, 50, angle=2.0, seed=6))) \
        or kind in ("winding", "pendulum")
    n_expected = 50 if kind in ("pendulum", "random-walk") else 51
    assert X.shape[0] == n_expected
    if manifold == "S2":
        err = normality_error(X)
    else:
        err = orth_error(X.reshape(-1, 3, 3))
    if kind == "noisy":
        assert 0 < err.max() <= 10 * spec.noise
    else:
        assert err.max() <= 8 * EPS


def test_winding_crossings_match_angle():
    for k in range(1, 7):
        for manifold in ("SO3", "S2"):
            X = generate(GenSpec("winding", manifold, 600, axis=(1, -1, 2), angle=k * PI + 0.3))
            assert lift_trajectory(X, manifold).crossings().tolist() == [k]


def test_haar_rotation_properties():
    R = haar_rotation(123, 10**6)
    assert orth_error(R).max() <= 8 * EPS
    assert np.all(np.linalg.det(R) > 0)
    tr = np.trace(R, axis1=1, axis2=2)
    # Haar moments: E[Tr R] = 0 and E[(Tr R)^2] = 1
    assert abs(tr.mean()) <= 0.01
    assert abs((tr**2).mean() - 1) <= 0.01
    # rotation angles follow the density (1 - cos t) / pi
    theta = np.linalg.norm(rotation_vector(R), axis=1)
    assert abs(theta.mean() - (PI / 2 + 2 / PI)) <= 0.01
    assert np.array_equal(haar_rotation(123, 1000), R[:1000])


def test_rng_is_philox_keyed_by_seed():
    a = make_rng(42).bit_generator
    assert type(a).__name__ == "Philox"
    assert a.state["state"]["key"][0] == 42
    with pytest.raises(ValidationError):
        make_rng(-1)
    with pytest.raises(ValidationError):
        make_rng(2**64)


@pytest.mark.parametrize("kw", [{"n": 0}, {"axis": (0, 0, 0)}, {"kind": "spiral"},
                                {"manifold": "R3"}, {"noise": -1.0}, {"angle": np.inf}])
def test_invalid_specs_are_rejected(kw):
    with pytest.raises(ValidationError):
        GenSpec(**kw)
    with pytest.raises(ValidationError):
        haar_rotation(1, 0)
