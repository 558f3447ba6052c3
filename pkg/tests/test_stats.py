import math

import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_unit
from geopga.lift import lift_trajectory
from geopga.rotation import DELTA_3, exp_so3
from geopga.stats import (
    LARGE_ERROR,
    ErrorRecords,
    bin_counts,
    bin_edges,
    lift_project_error,
    log_project_error,
    orth_normality_errors,
    summarize,
)
from geopga.trajgen import GenSpec, generate

EPS = 2.0**-52
PI = math.pi


def test_large_threshold():
    assert LARGE_ERROR == 2**12 * EPS


def test_bin_examples():
    h = bin_counts(np.zeros(10))
    assert h.counts[0] == 10 and h.total == 10
    h = bin_counts([EPS])
    lo, hi = bin_edges()
    (i,) = np.nonzero(h.counts)
    assert lo[i[0]] == EPS / 2 and hi[i[0]] == EPS
    errs = [2.0**j * EPS * 0.75 for j in range(11)]
    h = bin_counts(errs)
    assert h.counts[2:13].tolist() == [1] * 11 and h.total == 11


def test_bin_edges_and_boundaries():
    lo, hi = bin_edges()
    assert lo.size == 1 + 1 + 42 + 1
    assert hi[1] == EPS / 2 and hi[-2] == 2.0**41 * EPS and hi[-1] == np.inf
    # right-closed bins: 2^j eps belongs to bin j, its successor to bin j + 1
    for j in (0, 5, 41):
        h = bin_counts([2.0**j * EPS])
        assert h.counts[2 + j] == 1
        h = bin_counts([np.nextafter(2.0**j * EPS, 1)])
        assert h.counts[3 + j] == 1
    assert bin_counts([1e-300]).counts[1] == 1
    assert bin_counts([1.0, np.inf]).counts[-1] == 2


@given(st.lists(st.floats(0, 1e3, allow_nan=False), max_size=50), st.randoms())
def test_bin_counts_conserve_and_ignore_order(errs, rnd):
    h = bin_counts(errs)
    assert h.total == len(errs)
    shuffled = list(errs)
    rnd.shuffle(shuffled)
    assert np.array_equal(bin_counts(shuffled).counts, h.counts)
    lo, hi = bin_edges()
    for e in errs:
        idx = np.nonzero(bin_counts([e]).counts)[0][0]
        assert (e == 0 and idx == 0) or (lo[idx] < e <= hi[idx])


def test_summarize_examples():
    s = summarize([])
    assert s.max_error == 0 and s.large_count == 0
    s = summarize([1e-13, 3e-12])
    assert s.max_error == 3e-12 and s.large_count == 1
    assert "large" in s.format()


@given(st.lists(st.floats(0, 1, allow_nan=False), min_size=1, max_size=30))
def test_summarize_max_is_exact(errs):
    assert summarize(errs).max_error == max(errs)


def test_lift_project_error_on_clean_data():
    X = generate(GenSpec("random-walk", "SO3", 200, step=0.1, seed=1))
    rec = lift_project_error(X, lift_trajectory(X, "SO3"))
    assert len(rec) == 200
    assert summarize(rec).large_count == 0
    assert np.all((rec.theta >= 0) & (rec.theta <= PI))


def test_repeated_samples_have_equal_errors():
    X = generate(GenSpec("geodesic", "S2", 5, angle=2.0, seed=2))
    X = np.repeat(X, 3, axis=0)
    rec = lift_project_error(X, lift_trajectory(X, "S2"))
    e = rec.error.reshape(-1, 3)
    assert np.all(e == e[:, :1])


def test_near_singular_sweep_large_count(rng):
    # rotations within the case-4 window are mapped to angle pi exactly
    w = random_unit(rng, 300)
    far = exp_so3(rng.uniform(1e-3, PI - 1e-3, (200, 1)) * w[:200])
    near = exp_so3((PI - rng.uniform(1e-7, 1e-5, (100, 1))) * w[200:])
    X = np.concatenate([far, near]).reshape(-1, 9)
    rec = log_project_error(X, "SO3", base=np.eye(3).ravel())
    s = summarize(rec)
    assert s.large_count == 100
    assert s.max_error <= 1e-4
    big = rec.error > LARGE_ERROR
    assert np.all(rec.theta[big] >= PI - math.sqrt(2 * DELTA_3))


def test_orth_normality_errors():
    X = generate(GenSpec("random-walk", "SO3", 100, seed=3))
    rec = orth_normality_errors(X, "SO3")
    assert rec.error.max() <= 8 * EPS
    d = np.array([[0, 0, 1.0 + 1e-3], [0, 1.0, 0]])
    rec = orth_normality_errors(d, "S2")
    assert abs(rec.error[0] - 1e-3) <= 1e-15 and rec.error[1] == 0
    assert orth_normality_errors(np.eye(3).reshape(1, 9), "SO3").error[0] == 0


def test_records_concat():
    a = ErrorRecords(np.arange(2), np.zeros(2, int), np.zeros(2), np.ones(2))
    r = ErrorRecords.concat([a, a])
    assert len(r) == 4 and len(ErrorRecords.concat([])) == 0
