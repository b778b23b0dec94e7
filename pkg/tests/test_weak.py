import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qres.linalg import DimensionError, random_unitary
from qres.measurement import (
    LARGE_STRENGTH,
    WeakMeasurement,
    strong_limit,
    weak_apply,
    weak_fidelity,
    weak_fidelity_limit,
    weak_fidelity_zeta,
    weak_interpolation,
    weak_measurement,
    weak_purity,
    weak_purity_limits,
)
from qres.purity import fidelity_purity
from qres.states import bell_state, random_bipartite

STRENGTHS = [0.25 * i for i in range(21)]


def test_operator_coefficients():
    w = weak_measurement(0.8, 2, 1)
    assert abs(w.t1**2 + w.t2**2 - 1) < 1e-15
    assert abs(2 * w.t1 * w.t2 - 1 / math.cosh(0.8)) < 1e-15


@pytest.mark.parametrize("x", [0.0, 0.5, 3.0])
def test_completeness(x):
    w = weak_measurement(x, 3, 2)
    a, b = w.operators()
    assert np.allclose(a.conj().T @ a + b.conj().T @ b, np.eye(3))


def test_bad_dichotomy():
    with pytest.raises(ValueError):
        weak_measurement(1.0, 3, 0)
    with pytest.raises(ValueError):
        weak_measurement(1.0, 3, 3)
    with pytest.raises(ValueError):
        WeakMeasurement(1.0, (np.eye(2), np.eye(2)))


def test_dimension_checked():
    with pytest.raises(DimensionError):
        weak_apply(random_bipartite(3, 2, seed=0), weak_measurement(1.0, 2, 1))


@pytest.mark.parametrize("da,db,k", [(2, 2, 1), (3, 2, 1), (3, 2, 2), (4, 2, 2)])
def test_interpolation_identity(da, db, k):
    rho = random_bipartite(da, db, seed=da + k)
    for x in STRENGTHS:
        w = weak_measurement(x, da, k, random_unitary(da, np.random.default_rng(k)))
        assert np.max(np.abs(weak_apply(rho, w).mat - weak_interpolation(rho, w))) < 1e-10


def test_zero_strength_is_identity_exactly():
    rho = random_bipartite(2, 3, seed=4)
    w = weak_measurement(0.0, 2, 1)
    assert np.array_equal(weak_apply(rho, w).mat, rho.mat)
    assert weak_fidelity(rho, w) == 1.0
    assert weak_purity(rho, w) == weak_purity_limits(rho, w)[0]


def test_large_strength_limits():
    rho = random_bipartite(3, 2, seed=1)
    w = weak_measurement(LARGE_STRENGTH, 3, 1)
    assert abs(weak_fidelity(rho, w) - weak_fidelity_limit(rho, w)) < 1e-8
    assert abs(weak_purity(rho, w) - weak_purity_limits(rho, w)[1]) < 1e-8
    assert np.allclose(weak_apply(rho, w).mat, strong_limit(rho, w), atol=1e-12)


def test_zeta_form():
    for seed in range(10):
        rho = random_bipartite(2, 2, seed=seed)
        for x in (0.1, 1.0, 4.0):
            w = weak_measurement(x, 2, 1)
            assert abs(weak_fidelity_zeta(rho, w) - weak_fidelity(rho, w)) < 1e-10


def test_purity_formula_is_purity_of_image():
    for seed in range(10):
        rho = random_bipartite(3, 2, seed=seed)
        w = weak_measurement(1.3, 3, 1)
        assert abs(weak_purity(rho, w) - fidelity_purity(weak_apply(rho, w))) < 1e-12


def test_bell_closed_form():
    # ratio fidelity of the explicitly interpolated state
    rho = bell_state("phi+")
    for x in (0.5, 2.0):
        w = weak_measurement(x, 2, 1)
        t = 1 / math.cosh(x)
        omega = t * rho.mat + (1 - t) * strong_limit(rho, w)
        ro = np.vdot(rho.mat, omega).real
        expected = ro**2 / np.vdot(omega, omega).real
        assert abs(weak_fidelity(rho, w) - expected) < 1e-12


@given(st.integers(0, 100_000), st.floats(0, 6))
@settings(max_examples=100, deadline=None)
def test_monotone_in_strength(seed, x):
    rho = random_bipartite(2, 2, seed=seed)
    lo, hi = weak_measurement(x, 2, 1), weak_measurement(x + 0.5, 2, 1)
    assert weak_purity(rho, hi) <= weak_purity(rho, lo) + 1e-12
    f = weak_fidelity(rho, lo)
    assert weak_fidelity_limit(rho, lo) - 1e-12 <= f <= 1.0
