import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qres.linalg import (
    DimensionError,
    DimensionLimitError,
    NegativeEigenvalueError,
    NotHermitianError,
    eig_hermitian,
    hs_inner,
    partial_trace,
    psd_sqrt,
    random_unitary,
    tensor,
)
from qres.states import PAULI_X, PAULI_Y, PAULI_Z, bell_state

from conftest import rand_hermitian, rand_state


def kron_loops(a, b):
    ra, ca = a.shape
    rb, cb = b.shape
    out = np.zeros((ra * rb, ca * cb), dtype=complex)
    for i in range(ra):
        for j in range(ca):
            for k in range(rb):
                for l in range(cb):
                    out[i * rb + k, j * cb + l] = a[i, j] * b[k, l]
    return out


def partial_trace_loops(m, da, db, keep):
    if keep == "a":
        out = np.zeros((da, da), dtype=complex)
        for i in range(da):
            for j in range(da):
                out[i, j] = sum(m[i * db + k, j * db + k] for k in range(db))
    else:
        out = np.zeros((db, db), dtype=complex)
        for i in range(db):
            for j in range(db):
                out[i, j] = sum(m[k * db + i, k * db + j] for k in range(da))
    return out


class TestTensor:
    def test_identity(self):
        assert np.array_equal(tensor(np.eye(2), np.eye(2)), np.eye(4))

    def test_pauli_z(self):
        assert np.array_equal(tensor(PAULI_Z, np.eye(2)), np.diag([1, 1, -1, -1]))

    def test_matches_loops(self, rng):
        for _ in range(10):
            a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
            b = rng.standard_normal((2, 3)) + 1j * rng.standard_normal((2, 3))
            np.testing.assert_allclose(tensor(a, b), kron_loops(a, b), rtol=1e-14, atol=1e-14)

    def test_associative_on_integers(self, rng):
        a, b, c = (rng.integers(-5, 6, (2, 2)) for _ in range(3))
        assert np.array_equal(tensor(tensor(a, b), c), tensor(a, tensor(b, c)))

    def test_dimension_guard(self, monkeypatch):
        with pytest.raises(DimensionLimitError):
            tensor(np.eye(8), np.eye(16))
        monkeypatch.setenv("QRES_MAX_DIM", "256")
        assert tensor(np.eye(8), np.eye(16)).shape == (128, 128)


class TestPartialTrace:
    def test_product(self, rng):
        rho = rand_state(3, 1)
        sigma = rand_state(2, 2)
        np.testing.assert_allclose(partial_trace(np.kron(rho, sigma), (3, 2), "a"), rho, atol=1e-12)
        np.testing.assert_allclose(partial_trace(np.kron(rho, sigma), (3, 2), "b"), sigma, atol=1e-12)

    def test_bell_marginal(self):
        np.testing.assert_allclose(partial_trace(bell_state(), (2, 2), "a"), np.eye(2) / 2, atol=1e-15)

    def test_loops_and_trace(self, rng):
        for keep in "ab":
            m = rand_hermitian(4, rng)
            out = partial_trace(m, (2, 2), keep)
            np.testing.assert_allclose(out, partial_trace_loops(m, 2, 2, keep), atol=1e-12)
            assert abs(np.trace(out) - np.trace(m)) < 1e-12

    def test_mismatch(self):
        with pytest.raises(DimensionError):
            partial_trace(np.eye(4), (3, 2))


class TestEig:
    def test_diagonal(self):
        w, v = eig_hermitian(np.diag([0.25, 0.75]))
        np.testing.assert_allclose(w, [0.25, 0.75])
        np.testing.assert_allclose(np.abs(v), np.eye(2))

    def test_pauli_x(self):
        w, _ = eig_hermitian(PAULI_X)
        np.testing.assert_allclose(w, [-1, 1])

    def test_reconstruction(self, rng):
        for _ in range(100):
            m = rand_hermitian(4, rng)
            w, v = eig_hermitian(m)
            assert np.all(np.diff(w) >= 0)
            assert np.max(np.abs((v * w) @ v.conj().T - m)) < 1e-9
            assert np.max(np.abs(v.conj().T @ v - np.eye(4))) < 1e-9

    def test_rejects_non_hermitian(self):
        with pytest.raises(NotHermitianError):
            eig_hermitian(np.array([[0, 1], [0, 0]]))


class TestPsdSqrt:
    def test_identity(self):
        np.testing.assert_allclose(psd_sqrt(np.eye(3)), np.eye(3))

    def test_diagonal(self):
        np.testing.assert_allclose(psd_sqrt(np.diag([4, 9]) / 13), np.diag([2, 3]) / np.sqrt(13), atol=1e-15)

    def test_squares_back(self):
        for seed in range(50):
            m = rand_state(4, seed, rank=1 + seed % 4)
            s = psd_sqrt(m)
            assert np.max(np.abs(s @ s - m)) < 1e-9
            assert np.max(np.abs(s - s.conj().T)) < 1e-12

    def test_clamps_tiny_negative(self):
        s = psd_sqrt(np.diag([1.0, -1e-12]))
        assert s[1, 1] == 0

    def test_rejects_negative(self):
        with pytest.raises(NegativeEigenvalueError):
            psd_sqrt(np.diag([1.0, -1e-3]))


class TestHSInner:
    def test_values(self):
        assert hs_inner(np.eye(2), np.eye(2)) == 2
        assert hs_inner(PAULI_X, PAULI_Y) == 0

    @given(st.integers(0, 2**32 - 1), st.integers(2, 5))
    @settings(max_examples=50, deadline=None)
    def test_eigenvalue_sum(self, seed, d):
        m = rand_hermitian(d, np.random.default_rng(seed))
        w = np.linalg.eigvalsh(m)
        val = hs_inner(m, m)
        assert abs(val.imag) < 1e-12
        assert abs(val.real - np.sum(w**2)) < 1e-9 * max(1, np.sum(w**2))

    def test_mismatch(self):
        with pytest.raises(DimensionError):
            hs_inner(np.eye(2), np.eye(3))


def test_random_unitary_is_unitary(rng):
    u = random_unitary(5, rng)
    assert np.max(np.abs(u.conj().T @ u - np.eye(5))) < 1e-12
