"""Density matrices: validation, named families, random ensembles, Bloch data.

A :class:`DensityMatrix` is a validated, read-only wrapper around a complex
numpy array. It supports ``np.asarray`` so every measure in the package also
accepts plain arrays. :class:`BipartiteState` adds a ``(d_a, d_b)``
factorisation, a-index major.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

import numpy as np

from .linalg import (
    HERMITIAN_TOL,
    PSD_TOL,
    DimensionError,
    as_matrix,
    check_dim,
    dag,
    hermiticity_error,
    swap_operator,
)

TRACE_TOL = 1e-10

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)


class ValidationError(ValueError):
    """A matrix failed one of the density-matrix invariants.

    ``invariant`` names the failed condition (``"hermitian"``, ``"trace"``,
    ``"psd"``, ``"shape"``, ``"dims"``, ``"finite"``).
    """

    def __init__(self, invariant: str, message: str):
        super().__init__(f"{invariant}: {message}")
        self.invariant = invariant


def validate_density(m) -> np.ndarray:
    """Return ``m`` as a complex array or raise :class:`ValidationError`."""
    try:
        arr = np.asarray(m, dtype=complex)
    except (TypeError, ValueError) as exc:
        raise ValidationError("shape", f"not a numeric matrix ({exc})") from exc
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise ValidationError("shape", f"expected a non-empty square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError("finite", "matrix has NaN or infinite entries")
    check_dim(arr.shape[0])
    herr = hermiticity_error(arr)
    if herr > HERMITIAN_TOL:
        raise ValidationError("hermitian", f"max |rho - rho^dag| = {herr:.3g} exceeds {HERMITIAN_TOL}")
    tr = np.trace(arr)
    if abs(tr - 1) > TRACE_TOL:
        raise ValidationError("trace", f"trace is {tr.real:.12g}{tr.imag:+.3g}j, expected 1")
    lam = np.linalg.eigvalsh((arr + dag(arr)) / 2)
    if lam[0] < -PSD_TOL:
        raise ValidationError("psd", f"smallest eigenvalue {lam[0]:.3g} is below -{PSD_TOL}")
    return arr


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    mat: np.ndarray

    def __post_init__(self):
        arr = validate_density(self.mat).copy()
        arr.setflags(write=False)
        object.__setattr__(self, "mat", arr)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.mat
        return self.mat.astype(dtype)

    def __repr__(self):
        return f"{type(self).__name__}(dim={self.dim})"


@dataclass(frozen=True, eq=False)
class BipartiteState(DensityMatrix):
    dims: tuple[int, int] = field(default=(0, 0))

    def __post_init__(self):
        super().__post_init__()
        da, db = (int(x) for x in self.dims)
        if da < 1 or db < 1 or da * db != self.dim:
            raise ValidationError("dims", f"dims {self.dims} do not multiply to dimension {self.dim}")
        object.__setattr__(self, "dims", (da, db))

    def __repr__(self):
        return f"BipartiteState(dims={self.dims})"


def bipartite(m, dims) -> BipartiteState:
    return BipartiteState(np.asarray(m), tuple(dims))


def dims_of(rho) -> tuple[int, int]:
    """Factorisation of a state; plain arrays are treated as (d, 1)."""
    if isinstance(rho, BipartiteState):
        return rho.dims
    d = np.asarray(rho).shape[0]
    return (d, 1)


# --------------------------------------------------------------------------- #
# Named states                                                                #
# --------------------------------------------------------------------------- #

def maximally_mixed(d: int) -> DensityMatrix:
    return DensityMatrix(np.eye(d, dtype=complex) / d)


def pure_state(psi) -> DensityMatrix:
    psi = np.asarray(psi, dtype=complex).ravel()
    psi = psi / np.linalg.norm(psi)
    return DensityMatrix(np.outer(psi, psi.conj()))


def basis_projector(d: int, k: int) -> np.ndarray:
    p = np.zeros((d, d), dtype=complex)
    p[k, k] = 1.0
    return p


def bell_state(name: str = "phi+") -> BipartiteState:
    s = 1 / np.sqrt(2)
    vectors = {
        "phi+": [s, 0, 0, s],
        "phi-": [s, 0, 0, -s],
        "psi+": [0, s, s, 0],
        "psi-": [0, s, -s, 0],
    }
    psi = np.array(vectors[name], dtype=complex)
    return BipartiteState(np.outer(psi, psi.conj()), (2, 2))


def bell_diagonal(c1: float, c2: float, c3: float) -> BipartiteState:
    """(I + sum_i c_i sigma_i (x) sigma_i) / 4."""
    for c in (c1, c2, c3):
        if not -1 <= c <= 1:
            raise ValidationError("psd", f"correlation coefficient {c} outside [-1, 1]")
    m = np.eye(4, dtype=complex)
    for c, s in zip((c1, c2, c3), PAULIS):
        m = m + c * np.kron(s, s)
    m = m / 4
    lam = np.linalg.eigvalsh(m)
    if lam[0] < -PSD_TOL:
        raise ValidationError("psd", f"triple ({c1}, {c2}, {c3}) gives eigenvalue {lam[0]:.3g}")
    return BipartiteState(m, (2, 2))


def werner(d: int, y: float) -> BipartiteState:
    """Werner state with flip expectation ``y`` built from the swap operator."""
    if not 2 <= d <= 8:
        raise DimensionError(f"Werner dimension must be in [2, 8], got {d}")
    if not -1 <= y <= 1:
        raise ValueError(f"Werner parameter y must lie in [-1, 1], got {y}")
    denom = d**3 - d
    m = (d - y) / denom * np.eye(d * d, dtype=complex) + (y * d - 1) / denom * swap_operator(d)
    return BipartiteState(m, (d, d))


def classical_quantum(p, blocks) -> BipartiteState:
    """sum_k p_k |k><k| (x) rho_k with |k> the computational basis of a."""
    p = np.asarray(p, dtype=float)
    blocks = [np.asarray(b, dtype=complex) for b in blocks]
    if len(p) != len(blocks) or len(p) == 0:
        raise DimensionError(f"{len(p)} probabilities for {len(blocks)} blocks")
    if np.any(p < 0) or abs(p.sum() - 1) > TRACE_TOL:
        raise ValueError(f"probabilities must be non-negative and sum to 1, got {p.tolist()}")
    db = blocks[0].shape[0]
    for b in blocks:
        if b.shape != (db, db):
            raise DimensionError("all blocks must share one dimension")
        validate_density(b)
    da = len(p)
    m = sum(pk * np.kron(basis_projector(da, k), b) for k, (pk, b) in enumerate(zip(p, blocks)))
    return BipartiteState(m, (da, db))


# --------------------------------------------------------------------------- #
# Random ensembles                                                            #
# --------------------------------------------------------------------------- #

def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_density_matrix(d: int, rank: int | None = None, seed=None) -> np.ndarray:
    rank = d if rank is None else rank
    if not 1 <= rank <= d:
        raise ValueError(f"rank must be in [1, {d}], got {rank}")
    rng = _rng(seed)
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    m = g @ dag(g)
    return m / np.trace(m).real


def random_density(d: int, rank: int | None = None, seed=None) -> DensityMatrix:
    """G G^dag / tr(G G^dag) for a d x rank complex Gaussian G."""
    return DensityMatrix(random_density_matrix(d, rank, seed))


def random_bipartite(da: int, db: int, rank: int | None = None, seed=None) -> BipartiteState:
    return BipartiteState(random_density_matrix(da * db, rank, seed), (da, db))


# --------------------------------------------------------------------------- #
# SU(d) generators and Bloch data                                             #
# --------------------------------------------------------------------------- #

@dataclass(frozen=True, eq=False)
class GeneratorBasis:
    """Generalised Gell-Mann matrices, normalised to tr(X_i X_j) = 2 delta_ij.

    ``generators[:k]`` are the symmetric off-diagonal matrices,
    ``generators[k:2k]`` the antisymmetric ones for the same index pairs, and
    the last ``d - 1`` are diagonal.
    """

    dim: int
    generators: np.ndarray
    pairs: tuple[tuple[int, int], ...]

    @property
    def k(self) -> int:
        return len(self.pairs)

    def __len__(self):
        return len(self.generators)


def generator_basis(d: int) -> GeneratorBasis:
    if not 2 <= d <= 8:
        raise DimensionError(f"generator basis supports 2 <= d <= 8, got {d}")
    pairs = tuple(combinations(range(d), 2))
    sym, asym, diag = [], [], []
    for i, j in pairs:
        s = np.zeros((d, d), dtype=complex)
        s[i, j] = s[j, i] = 1
        a = np.zeros((d, d), dtype=complex)
        a[i, j] = -1j
        a[j, i] = 1j
        sym.append(s)
        asym.append(a)
    for l in range(1, d):
        entries = [1.0] * l + [-float(l)] + [0.0] * (d - l - 1)
        diag.append(np.sqrt(2 / (l * (l + 1))) * np.diag(entries).astype(complex))
    gens = np.array(sym + asym + diag)
    gens.setflags(write=False)
    return GeneratorBasis(d, gens, pairs)


def bloch_expand(rho, basis: GeneratorBasis | None = None) -> np.ndarray:
    """x_i = tr(rho X_i)."""
    rho = as_matrix(rho)
    basis = generator_basis(rho.shape[0]) if basis is None else basis
    if basis.dim != rho.shape[0]:
        raise DimensionError(f"basis dimension {basis.dim} does not match state dimension {rho.shape[0]}")
    x = np.einsum("ij,kji->k", rho, basis.generators)
    return x.real


def bloch_reconstruct(x, basis: GeneratorBasis) -> np.ndarray:
    """I/d + (1/2) sum_i x_i X_i."""
    x = np.asarray(x, dtype=float)
    return np.eye(basis.dim) / basis.dim + 0.5 * np.einsum("k,kij->ij", x, basis.generators)


def orthonormal_operator_basis(d: int) -> np.ndarray:
    """[I/sqrt(d), X_1/sqrt(2), ...] with tr(X_i^dag X_j) = delta_ij."""
    if d == 1:
        return np.ones((1, 1, 1), dtype=complex)
    gens = generator_basis(d).generators / np.sqrt(2)
    return np.concatenate([np.eye(d, dtype=complex)[None] / np.sqrt(d), gens])


def correlation_matrix(rho: BipartiteState) -> np.ndarray:
    """Real (d_a^2 x d_b^2) matrix gamma_ij = tr(rho X_i (x) Y_j)."""
    da, db = dims_of(rho)
    if da > 8 or db > 8:
        raise DimensionError(f"correlation matrix supports factors up to 8, got {(da, db)}")
    r = np.asarray(rho).reshape(da, db, da, db)
    xa = orthonormal_operator_basis(da)
    yb = orthonormal_operator_basis(db)
    gamma = np.einsum("abcd,ica,jdb->ij", r, xa, yb)
    return gamma.real


# --------------------------------------------------------------------------- #
# JSON state format                                                           #
# --------------------------------------------------------------------------- #

def state_from_dict(obj) -> DensityMatrix:
    """Parse ``{"dims": [...], "matrix": [[[re, im], ...], ...]}``."""
    if not isinstance(obj, dict):
        raise ValidationError("format", "state must be a JSON object")
    for key in ("dims", "matrix"):
        if key not in obj:
            raise ValidationError("format", f"missing field {key!r}")
    dims = obj["dims"]
    if not isinstance(dims, list) or len(dims) not in (1, 2) or not all(
        isinstance(x, int) and not isinstance(x, bool) and x >= 1 for x in dims
    ):
        raise ValidationError("dims", f"dims must be [d] or [d_a, d_b] of positive integers, got {dims!r}")
    rows = obj["matrix"]
    if not isinstance(rows, list):
        raise ValidationError("format", "matrix must be an array of rows")
    try:
        arr = np.array([[complex(float(e[0]), float(e[1])) for e in row] for row in rows], dtype=complex)
    except (TypeError, ValueError, IndexError) as exc:
        raise ValidationError("format", f"entries must be [re, im] pairs ({exc})") from exc
    n = int(np.prod(dims))
    check_dim(n)
    if arr.shape != (n, n):
        raise ValidationError("shape", f"matrix shape {arr.shape} does not match dims {dims}")
    if len(dims) == 2:
        return BipartiteState(arr, tuple(dims))
    return DensityMatrix(arr)


def state_to_dict(rho) -> dict:
    m = np.asarray(rho)
    dims = list(rho.dims) if isinstance(rho, BipartiteState) else [m.shape[0]]
    return {"dims": dims, "matrix": [[[float(z.real), float(z.imag)] for z in row] for row in m]}


def load_state(path) -> DensityMatrix:
    text = Path(path).read_text()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError("format", f"invalid JSON ({exc})") from exc
    return state_from_dict(obj)


def save_state(rho, path) -> None:
    Path(path).write_text(json.dumps(state_to_dict(rho)) + "\n")
