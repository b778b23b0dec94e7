"""Dense complex matrix kernel.

Thin wrappers over numpy that enforce the tolerances and the dimension guard
used everywhere else in the package. Composite systems are ordered a-major,
b-minor, so ``tensor(a, b)[i*rb + k, j*cb + l] == a[i, j] * b[k, l]``.
"""
from __future__ import annotations

import os

import numpy as np

HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-9
UNITARY_TOL = 1e-9
DEFAULT_MAX_DIM = 64


class DimensionError(ValueError):
    """Operand shapes are incompatible."""


class DimensionLimitError(DimensionError):
    """A result would exceed the configured maximum dimension."""


class NotHermitianError(ValueError):
    pass


class NegativeEigenvalueError(ValueError):
    pass


def max_dim() -> int:
    """Dimension guard, overridable through ``QRES_MAX_DIM``."""
    raw = os.environ.get("QRES_MAX_DIM")
    if raw is None:
        return DEFAULT_MAX_DIM
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"QRES_MAX_DIM must be an integer, got {raw!r}") from exc
    if value < 1:
        raise ValueError(f"QRES_MAX_DIM must be positive, got {value}")
    return value


def check_dim(d: int) -> None:
    limit = max_dim()
    if d > limit:
        raise DimensionLimitError(f"dimension {d} exceeds the maximum of {limit} (QRES_MAX_DIM)")


def as_matrix(m) -> np.ndarray:
    """Coerce to a finite 2-d complex array."""
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2:
        raise DimensionError(f"expected a 2-d matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix has non-finite entries")
    return arr


def dag(m) -> np.ndarray:
    return np.conj(np.asarray(m)).T


def tensor(a, b) -> np.ndarray:
    a = as_matrix(a)
    b = as_matrix(b)
    check_dim(a.shape[0] * b.shape[0])
    check_dim(a.shape[1] * b.shape[1])
    return np.kron(a, b)


def partial_trace(m, dims: tuple[int, int], keep: str = "a") -> np.ndarray:
    """Trace out one half of a bipartite operator.

    ``keep`` is ``"a"`` or ``"b"``; the other factor is traced out.
    """
    m = as_matrix(m)
    da, db = dims
    n = da * db
    if m.shape != (n, n):
        raise DimensionError(f"matrix of shape {m.shape} does not match dims {dims}")
    r = m.reshape(da, db, da, db)
    if keep == "a":
        return np.einsum("ibjb->ij", r)
    if keep == "b":
        return np.einsum("aiaj->ij", r)
    raise ValueError(f"keep must be 'a' or 'b', got {keep!r}")


def hermiticity_error(m) -> float:
    m = np.asarray(m)
    return float(np.max(np.abs(m - dag(m)))) if m.size else 0.0


def eig_hermitian(m) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix."""
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got {m.shape}")
    err = hermiticity_error(m)
    if err > HERMITIAN_TOL:
        raise NotHermitianError(f"matrix is not Hermitian (max |m - m^dag| = {err:.3g})")
    # symmetrise so eigh sees exactly the Hermitian part
    return np.linalg.eigh((m + dag(m)) / 2)


def psd_sqrt(m) -> np.ndarray:
    """Square root of a PSD matrix; eigenvalues down to -PSD_TOL are clamped to 0."""
    w, v = eig_hermitian(m)
    if w.size and w[0] < -PSD_TOL:
        raise NegativeEigenvalueError(f"matrix has eigenvalue {w[0]:.3g} < -{PSD_TOL}")
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ dag(v)


def hs_inner(a, b) -> complex:
    """Hilbert-Schmidt inner product tr(a^dag b)."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    return complex(np.vdot(a, b))


def hs_norm(a) -> float:
    return float(np.sqrt(hs_inner(a, a).real))


def is_unitary(u, tol: float = UNITARY_TOL) -> bool:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return bool(np.max(np.abs(dag(u) @ u - np.eye(u.shape[0]))) < tol)


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary from the QR decomposition of a Ginibre matrix."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def swap_operator(d: int) -> np.ndarray:
    """Flip operator sum_{ab} |a><b| (x) |b><a| on C^d (x) C^d."""
    f = np.zeros((d * d, d * d), dtype=complex)
    for a in range(d):
        for b in range(d):
            f[a * d + b, b * d + a] = 1.0
    return f
