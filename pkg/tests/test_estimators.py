import math

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from geopga import IntrinsicMean, PrincipalGeodesicAnalysis
from geopga.exceptions import ValidationError
from geopga.manifold import Layout
from geopga.trajgen import GenSpec, generate

EPS = 2.0**-52
PI = math.pi


def test_params_and_clone():
    est = PrincipalGeodesicAnalysis(layout="S2*2", n_components=2, scheme="ambient3")
    params = est.get_params()
    assert params["layout"] == "S2*2" and params["n_components"] == 2
    c = clone(est).set_params(n_components=1)
    assert c.n_components == 1 and est.n_components == 2
    assert IntrinsicMean(layout="SO3").get_params()["alpha"] == 1.0


def test_pga_planar_pendulum():
    X = generate(GenSpec("pendulum", "SO3", 2000, amplitude=1.5, dt=0.01))
    est = PrincipalGeodesicAnalysis(layout="SO3").fit(X)
    assert est.rank_ == 1 and est.components_.shape == (1, 3)
    assert est.all_singular_values_[1] / est.all_singular_values_[0] <= 1e-12
    scores = est.transform(X)
    assert scores.shape == (2000, 1)
    np.testing.assert_allclose(est.inverse_transform(scores), X, atol=1e-10)
    np.testing.assert_allclose(est.reconstruct(), X[1:], atol=1e-10)


def test_pga_product_layout_truncation():
    S = generate(GenSpec("random-walk", "S2", 80, step=0.05, seed=1))
    R = generate(GenSpec("random-walk", "SO3", 80, step=0.05, seed=2))
    X = np.hstack([S, R])
    full = PrincipalGeodesicAnalysis(layout="S2 SO3").fit(X)
    assert full.rank_ == Layout.parse("S2 SO3").tangent_dim == 5
    assert np.abs(full.reconstruct() - X[1:]).max() <= 2**12 * EPS
    two = PrincipalGeodesicAnalysis(layout="S2 SO3", n_components=2).fit(X)
    err2 = np.abs(two.reconstruct() - X[1:]).max()
    err1 = np.abs(two.reconstruct(1) - X[1:]).max()
    assert err2 <= err1
    with pytest.raises(ValidationError):
        PrincipalGeodesicAnalysis(layout="S2 SO3", n_components=6).fit(X)


def test_pga_multi_trajectory():
    A = generate(GenSpec("geodesic", "SO3", 30, angle=0.6, seed=1))
    B = generate(GenSpec("geodesic", "SO3", 20, angle=0.6, seed=2))
    est = PrincipalGeodesicAnalysis(layout="SO3").fit(np.vstack([A, B]), lengths=[31, 21])
    assert est.lift_.tangents.shape == (52, 3)
    assert est.mean_result_ is not None and est.mean_result_.grad_norm <= 1e-12
    np.testing.assert_array_equal(est.base_, est.mean_result_.mean)
    assert np.abs(est.reconstruct() - np.vstack([A, B])).max() <= 2**12 * EPS
    with pytest.raises(ValidationError):
        est.fit(np.vstack([A, B]), lengths=[30, 21])


def test_intrinsic_mean_estimator():
    X = generate(GenSpec("random-walk", "S2", 40, step=0.1, seed=3))
    est = IntrinsicMean(layout="S2").fit(X)
    T = est.transform(X)
    assert T.shape == (40, 2)
    np.testing.assert_allclose(T.mean(axis=0), 0, atol=1e-12)
    np.testing.assert_allclose(est.inverse_transform(T), X, atol=1e-14)
    assert est.n_iter_ >= 1 and est.grad_norm_ <= 1e-12


def test_not_fitted():
    with pytest.raises(NotFittedError):
        PrincipalGeodesicAnalysis().transform(np.eye(3).reshape(1, 9))
    with pytest.raises(NotFittedError):
        IntrinsicMean().transform(np.eye(3).reshape(1, 9))


def test_input_validation():
    with pytest.raises(ValidationError):
        PrincipalGeodesicAnalysis(layout="SO3").fit(np.ones((3, 9)))
    est = PrincipalGeodesicAnalysis(layout="SO3", project=True).fit(np.eye(3).reshape(1, 9) + 1e-7)
    assert est.rank_ == 0
