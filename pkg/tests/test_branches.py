import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from geopga.branches import branch_index, branch_map, count_crossings
from geopga.exceptions import BranchBoundaryError, ValidationError

PI = math.pi
e1 = np.array([1.0, 0.0, 0.0])
e3 = np.array([0.0, 0.0, 1.0])


def test_branch_index_interior_and_boundaries():
    assert branch_index(0.0) == 0
    assert branch_index(1.0) == 0
    assert branch_index(4.0) == 1
    assert branch_index(PI) == 1
    assert branch_index(5 * PI) == 5
    assert branch_index(np.nextafter(2 * PI, 0)) == 2
    np.testing.assert_array_equal(branch_index([0.5, 3.5, 7.0]), [0, 1, 2])


def test_count_crossings():
    assert count_crossings([0, 0, 1, 2, 2, 1]) == 3
    assert count_crossings([3]) == 0


def test_branch_map_examples():
    v = 0.5 * PI * e1
    assert np.array_equal(branch_map(v, 0, 0), v)
    np.testing.assert_allclose(branch_map(v, 0, 1), 1.5 * PI * -e1, rtol=0, atol=1e-15)
    np.testing.assert_allclose(branch_map(v, 0, 2), 2.5 * PI * e1, rtol=0, atol=1e-15)


def test_branch_map_rejects_boundary_and_wrong_shell():
    with pytest.raises(BranchBoundaryError):
        branch_map(PI * e3, 0, 1)
    with pytest.raises(BranchBoundaryError):
        branch_map(np.zeros(3), 0, 1)
    with pytest.raises(ValidationError):
        branch_map(0.5 * e3, 1, 2)
    with pytest.raises(ValidationError):
        branch_map(0.5 * e3, 0, -1)


@given(st.floats(0.01, 0.99), st.integers(0, 4), st.integers(0, 4))
def test_branch_maps_compose_to_identity(frac, k, l):
    v = (k + frac) * PI * np.array([0.6, 0.0, 0.8])
    w = branch_map(v, k, l)
    assert k == l or branch_index(np.linalg.norm(w)) == l
    back = branch_map(w, l, k)
    # the intermediate image carries a rounding error relative to its own norm
    scale = max(np.linalg.norm(v), np.linalg.norm(w))
    assert np.abs(back - v).max() <= 4 * 2.0**-52 * scale


@given(st.floats(0.01, 0.99), st.integers(0, 4), st.integers(0, 4))
def test_branch_maps_downward_round_trip(frac, k, l):
    k, l = max(k, l), min(k, l)
    v = (k + frac) * PI * np.array([0.0, 0.6, -0.8])
    back = branch_map(branch_map(v, k, l), l, k)
    assert np.abs(back - v).max() <= 4 * 2.0**-52 * np.linalg.norm(v)
