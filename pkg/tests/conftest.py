import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

EPS = 2.0**-52


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_unit(rng, size=None):
    shape = (3,) if size is None else (size, 3)
    g = rng.standard_normal(shape)
    return g / np.linalg.norm(g, axis=-1, keepdims=True)
