"""Quantum channels in Kraus form.

Free operations for purity (mixtures of unitaries, noisy operations), random
incoherent and general CPTP maps for the property harness, and the
Stinespring isometry. Environment blocks are environment-index major:
rows ``k*d:(k+1)*d`` of the isometry hold ``A_k``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import (
    DimensionError,
    as_matrix,
    dag,
    is_unitary,
    partial_trace,
    random_unitary,
)
from .states import BipartiteState, DensityMatrix

COMPLETENESS_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class KrausChannel:
    kraus: tuple

    def __post_init__(self):
        ops = tuple(as_matrix(a) for a in self.kraus)
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")
        d = ops[0].shape[1]
        for a in ops:
            if a.shape != (d, d):
                raise DimensionError(f"Kraus operators must all be {d}x{d}, got {a.shape}")
        err = completeness_error(ops)
        if err > COMPLETENESS_TOL:
            raise ValueError(f"completeness: max |sum A^dag A - I| = {err:.3g}")
        object.__setattr__(self, "kraus", ops)

    @property
    def dim(self) -> int:
        return self.kraus[0].shape[0]

    def __call__(self, rho) -> np.ndarray:
        m = as_matrix(rho)
        if m.shape != (self.dim, self.dim):
            raise DimensionError(f"channel on dimension {self.dim} applied to shape {m.shape}")
        return sum(a @ m @ dag(a) for a in self.kraus)

    def is_unital(self, tol: float = 1e-10) -> bool:
        eye = np.eye(self.dim)
        return bool(np.max(np.abs(self(eye / self.dim) - eye / self.dim)) < tol)


def completeness_error(kraus) -> float:
    d = kraus[0].shape[1]
    s = sum(dag(a) @ a for a in kraus)
    return float(np.max(np.abs(s - np.eye(d))))


def apply_channel(channel: KrausChannel, rho) -> DensityMatrix:
    """Apply and revalidate; a malformed channel surfaces as a ValidationError."""
    out = channel(rho)
    if isinstance(rho, BipartiteState):
        return BipartiteState(out, rho.dims)
    return DensityMatrix(out)


def compose(second: KrausChannel, first: KrausChannel) -> KrausChannel:
    """Channel rho -> second(first(rho))."""
    return KrausChannel(tuple(b @ a for b in second.kraus for a in first.kraus))


def identity_channel(d: int) -> KrausChannel:
    return KrausChannel((np.eye(d, dtype=complex),))


def local_channel(channel: KrausChannel, dims: tuple[int, int], side: str = "b") -> KrausChannel:
    """Lift a channel on one factor to the bipartite system."""
    da, db = dims
    if side == "b":
        if channel.dim != db:
            raise DimensionError(f"channel dimension {channel.dim} does not match d_b = {db}")
        return KrausChannel(tuple(np.kron(np.eye(da), a) for a in channel.kraus))
    if channel.dim != da:
        raise DimensionError(f"channel dimension {channel.dim} does not match d_a = {da}")
    return KrausChannel(tuple(np.kron(a, np.eye(db)) for a in channel.kraus))


def mixture_of_unitaries(p, us) -> KrausChannel:
    """Kraus set {sqrt(p_i) U_i}."""
    p = np.asarray(p, dtype=float)
    if len(p) != len(us) or len(p) == 0:
        raise ValueError(f"{len(p)} probabilities for {len(us)} unitaries")
    if np.any(p < 0) or abs(p.sum() - 1) > 1e-12:
        raise ValueError(f"probabilities must be non-negative and sum to 1, got {p.tolist()}")
    for u in us:
        if not is_unitary(u, 1e-10):
            raise ValueError("every operator in a mixture of unitaries must be unitary")
    return KrausChannel(tuple(np.sqrt(pi) * as_matrix(u) for pi, u in zip(p, us)))


def noisy_operation(env_dim: int, u) -> KrausChannel:
    """rho -> tr_E[U (rho (x) I/e) U^dag] as a Kraus channel.

    Kraus operators are A_jk = (I (x) <k|) U (I (x) |j>) / sqrt(e).
    """
    u = as_matrix(u)
    n = u.shape[0]
    if n % env_dim:
        raise DimensionError(f"unitary of size {n} is not a multiple of env_dim {env_dim}")
    if not is_unitary(u, 1e-10):
        raise ValueError("noisy operation needs a unitary on system (x) environment")
    d = n // env_dim
    t = u.reshape(d, env_dim, d, env_dim)
    kraus = tuple(t[:, k, :, j] / np.sqrt(env_dim) for j in range(env_dim) for k in range(env_dim))
    return KrausChannel(kraus)


def noisy_operation_direct(env_dim: int, u, rho) -> np.ndarray:
    """tr_E[U (rho (x) I/e) U^dag] evaluated literally."""
    u = as_matrix(u)
    m = as_matrix(rho)
    big = u @ np.kron(m, np.eye(env_dim) / env_dim) @ dag(u)
    return partial_trace(big, (m.shape[0], env_dim), keep="a")


def dephasing_channel(d: int) -> KrausChannel:
    eye = np.eye(d, dtype=complex)
    return KrausChannel(tuple(np.outer(eye[i], eye[i]) for i in range(d)))


def stinespring_isometry(channel: KrausChannel) -> np.ndarray:
    """(K d) x d isometry V = sum_k |k> (x) A_k."""
    err = completeness_error(channel.kraus)
    if err > COMPLETENESS_TOL:
        raise ValueError(f"completeness: max |sum A^dag A - I| = {err:.3g}")
    return np.vstack(channel.kraus)


def stinespring_apply(v, rho, n_env: int) -> np.ndarray:
    """tr_K[V rho V^dag] with the environment as the leading factor."""
    m = as_matrix(rho)
    big = as_matrix(v) @ m @ dag(v)
    return partial_trace(big, (n_env, m.shape[0]), keep="b")


def stinespring_block(v, rho, n_env: int, k: int) -> np.ndarray:
    """Environment block (k, k) of V rho V^dag, equal to A_k rho A_k^dag."""
    m = as_matrix(rho)
    d = m.shape[0]
    big = as_matrix(v) @ m @ dag(v)
    return big[k * d:(k + 1) * d, k * d:(k + 1) * d]


# --------------------------------------------------------------------------- #
# Random channels                                                             #
# --------------------------------------------------------------------------- #

def _rng(seed):
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def sample_incoherent_channel(d: int, n_kraus: int, seed=None) -> KrausChannel:
    """Random incoherent channel.

    Each A_k maps basis vectors to basis vectors injectively on its support
    columns, so A_k^dag A_k is diagonal and completeness reduces to
    per-column weights summing to one. Permutations, diagonal phases, basis
    projections and amplitude-damping-like transfers are all special cases.
    """
    if n_kraus < 1:
        raise ValueError("n_kraus must be at least 1")
    rng = _rng(seed)
    support = rng.random((n_kraus, d)) < 0.6
    for j in range(d):
        if not support[:, j].any():
            support[rng.integers(n_kraus), j] = True
    weights = np.where(support, rng.exponential(size=(n_kraus, d)), 0.0)
    weights /= weights.sum(axis=0, keepdims=True)
    phases = np.exp(2j * np.pi * rng.random((n_kraus, d)))
    kraus = []
    for k in range(n_kraus):
        perm = rng.permutation(d)
        a = np.zeros((d, d), dtype=complex)
        a[perm, np.arange(d)] = np.sqrt(weights[k]) * phases[k]
        kraus.append(a)
    return KrausChannel(tuple(kraus))


def incoherent_projection_channel(d: int, subset) -> KrausChannel:
    """Two-outcome measurement {P, I - P} with P projecting onto a set of basis vectors."""
    p = np.zeros((d, d), dtype=complex)
    for i in subset:
        p[i, i] = 1
    return KrausChannel((p, np.eye(d) - p))


def random_channel(d: int, n_kraus: int, seed=None) -> KrausChannel:
    """Random CPTP map from a Haar-ish isometry split into Kraus blocks."""
    rng = _rng(seed)
    g = rng.standard_normal((n_kraus * d, d)) + 1j * rng.standard_normal((n_kraus * d, d))
    q, _ = np.linalg.qr(g)
    return KrausChannel(tuple(q[k * d:(k + 1) * d] for k in range(n_kraus)))


def random_mixture_of_unitaries(d: int, n: int, seed=None) -> KrausChannel:
    rng = _rng(seed)
    p = rng.dirichlet(np.ones(n))
    return mixture_of_unitaries(p, [random_unitary(d, rng) for _ in range(n)])


def random_noisy_operation(d: int, env_dim: int, seed=None) -> KrausChannel:
    rng = _rng(seed)
    return noisy_operation(env_dim, random_unitary(d * env_dim, rng))


def random_unital_channel(d: int, seed=None) -> KrausChannel:
    """Either a mixture of 2-5 unitaries or a noisy operation, chosen at random."""
    rng = _rng(seed)
    if rng.random() < 0.5:
        return random_mixture_of_unitaries(d, int(rng.integers(2, 6)), rng)
    return random_noisy_operation(d, int(rng.integers(2, 4)), rng)
