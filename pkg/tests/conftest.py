import numpy as np
import pytest

from qres.states import random_density_matrix


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def rand_state(d, seed, rank=None):
    return random_density_matrix(d, rank, seed)


def rand_hermitian(d, rng):
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (a + a.conj().T) / 2


def grid_delta(rho, n_theta, n_phi):
    """Independent Delta over a Bloch grid: explicit projectors, explicit dephasing."""
    m = np.asarray(rho.mat)
    db = rho.dims[1]
    ra = np.trace(m.reshape(2, db, 2, db), axis1=1, axis2=3)
    theta = np.linspace(0, np.pi, n_theta)
    phi = np.linspace(0, 2 * np.pi, n_phi, endpoint=False)
    tt, pp = np.meshgrid(theta, phi, indexing="ij")
    n = np.stack([np.cos(tt / 2), np.sin(tt / 2) * np.exp(1j * pp)], axis=-1)
    p0 = n[..., :, None] * n[..., None, :].conj()
    p1 = np.eye(2) - p0
    eye = np.eye(db)
    big0 = np.einsum("...ij,kl->...ikjl", p0, eye).reshape(p0.shape[:-2] + (2 * db, 2 * db))
    big1 = np.einsum("...ij,kl->...ikjl", p1, eye).reshape(p0.shape[:-2] + (2 * db, 2 * db))
    pim = big0 @ m @ big0 + big1 @ m @ big1
    pia = p0 @ ra @ p0 + p1 @ ra @ p1

    def ratio(a, b):
        num = np.einsum("ij,...ji->...", a, b).real ** 2
        return num / (np.trace(a @ a).real * np.einsum("...ij,...ji->...", b, b).real)

    return (1 - ratio(m, pim)) - (1 - ratio(ra, pia))


def pytest_configure(config):
    config._acceptance_lines = []


@pytest.fixture(scope="session")
def criterion(request):
    lines = request.config._acceptance_lines

    def record(label, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {label}: {detail}"
        lines.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
