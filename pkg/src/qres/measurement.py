"""Measurements on subsystem a and the correlations built from them.

Projective measurements dephase subsystem a; coherence relative to a
measurement is 1 - F(rho, Pi(rho)); the correlation Q_F minimises the gap
between the global and the marginal version of that quantity over all
von Neumann measurements on a. Weak measurements interpolate between doing
nothing (x = 0) and the projective limit (x -> infinity).

For a rank-1 basis u_k, tr[Pi(rho)^2] = sum_k ||(u_k^dag (x) I) rho (u_k (x) I)||^2,
which is what the optimisers evaluate in batch.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize

from .fidelity import fidelity
from .linalg import DimensionError, as_matrix, dag, eig_hermitian, partial_trace
from .purity import fidelity_purity, linear_purity
from .states import BipartiteState, dims_of

PROJECTOR_TOL = 1e-10
LARGE_STRENGTH = 40.0
NEGATIVE_NOISE = 1e-8


@dataclass(frozen=True, eq=False)
class ProjectiveMeasurement:
    """Complete set of orthogonal projectors on subsystem a.

    ``basis`` holds the measurement vectors as columns when the projectors
    are rank one; ``angles`` records the optimiser parameters, if any.
    """

    subsystem_dim: int
    projectors: tuple
    basis: np.ndarray | None = None
    angles: tuple | None = field(default=None)

    def __post_init__(self):
        ps = tuple(as_matrix(p) for p in self.projectors)
        d = self.subsystem_dim
        for p in ps:
            if p.shape != (d, d):
                raise DimensionError(f"projector of shape {p.shape} on subsystem of dimension {d}")
        for i, p in enumerate(ps):
            for j, q in enumerate(ps):
                target = p if i == j else np.zeros_like(p)
                if np.max(np.abs(p @ q - target)) > PROJECTOR_TOL:
                    raise ValueError(f"projectors {i} and {j} are not orthogonal idempotents")
        if np.max(np.abs(sum(ps) - np.eye(d))) > PROJECTOR_TOL:
            raise ValueError("projectors do not sum to the identity")
        object.__setattr__(self, "projectors", ps)

    @classmethod
    def from_basis(cls, u, angles=None) -> "ProjectiveMeasurement":
        u = as_matrix(u)
        d = u.shape[0]
        ps = tuple(np.outer(u[:, k], u[:, k].conj()) for k in range(d))
        return cls(d, ps, u, angles)

    @classmethod
    def computational(cls, d: int) -> "ProjectiveMeasurement":
        return cls.from_basis(np.eye(d, dtype=complex))


def bloch_basis(theta: float, phi: float) -> np.ndarray:
    """Qubit basis {|n>, |-n>} for the Bloch direction (theta, phi)."""
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    e = complex(math.cos(phi), math.sin(phi))
    return np.array([[c, -s * e.conjugate()], [s * e, c]], dtype=complex)


def _bloch_bases(theta, phi) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    e = np.exp(1j * phi)
    u = np.empty(theta.shape + (2, 2), dtype=complex)
    u[..., 0, 0] = c
    u[..., 0, 1] = -s * e.conj()
    u[..., 1, 0] = s * e
    u[..., 1, 1] = c
    return u


def givens_unitary(params, d: int, pairs=None) -> np.ndarray:
    """Product of complex Givens rotations, one (theta, phi) per index pair."""
    if pairs is None:
        pairs = [(i, j) for i in range(d) for j in range(i + 1, d)]
    u = np.eye(d, dtype=complex)
    params = np.asarray(params, dtype=float).reshape(-1, 2)
    for (i, j), (theta, phi) in zip(pairs, params):
        g = np.eye(d, dtype=complex)
        c, s = math.cos(theta), math.sin(theta)
        e = complex(math.cos(phi), math.sin(phi))
        g[i, i] = c
        g[j, j] = c
        g[i, j] = -s * e.conjugate()
        g[j, i] = s * e
        u = u @ g
    return u


# --------------------------------------------------------------------------- #
# Projective measurement                                                      #
# --------------------------------------------------------------------------- #

def _bip(rho) -> tuple[np.ndarray, int, int]:
    m = as_matrix(rho)
    da, db = dims_of(rho)
    return m, da, db


def _check_subsystem(m: ProjectiveMeasurement, da: int):
    if m.subsystem_dim != da:
        raise DimensionError(f"measurement on dimension {m.subsystem_dim} applied to subsystem of dimension {da}")


def dephase(rho, projectors, dims) -> np.ndarray:
    """sum_k (P_k (x) I) rho (P_k (x) I)."""
    m = as_matrix(rho)
    eye = np.eye(dims[1])
    out = np.zeros_like(m)
    for p in projectors:
        big = np.kron(p, eye)
        out += big @ m @ big
    return out


def apply_measurement(rho, meas: ProjectiveMeasurement) -> BipartiteState:
    m, da, db = _bip(rho)
    _check_subsystem(meas, da)
    return BipartiteState(dephase(m, meas.projectors, (da, db)), (da, db))


def coherence_rel_measurement(rho, meas: ProjectiveMeasurement) -> float:
    m, da, db = _bip(rho)
    _check_subsystem(meas, da)
    return 1.0 - fidelity(m, dephase(m, meas.projectors, (da, db)))


def marginal(rho, keep: str = "a") -> np.ndarray:
    m, da, db = _bip(rho)
    return partial_trace(m, (da, db), keep)


def delta_coherence(rho, meas: ProjectiveMeasurement) -> float:
    """C_F(rho|Pi) - C_F(rho_a|Pi_a); the product-state term reduces to the marginal."""
    m, da, db = _bip(rho)
    _check_subsystem(meas, da)
    ra = partial_trace(m, (da, db), "a")
    local = 1.0 - fidelity(ra, dephase(ra, meas.projectors, (da, 1)))
    return coherence_rel_measurement(rho, meas) - local


# --------------------------------------------------------------------------- #
# Optimisation over measurement bases                                         #
# --------------------------------------------------------------------------- #

class _Landscape:
    """Vectorised F(rho, Pi_U(rho)) and F(rho_a, Pi_U(rho_a)) over batches of bases U."""

    def __init__(self, rho):
        m, da, db = _bip(rho)
        self.da, self.db = da, db
        self.r = m.reshape(da, db, da, db)
        self.ra = partial_trace(m, (da, db), "a")
        self.purity = linear_purity(m)
        self.purity_a = linear_purity(self.ra)

    def global_fid(self, u) -> np.ndarray:
        blocks = np.einsum("...ik,ibjc,...jk->...kbc", u.conj(), self.r, u)
        return np.sum(np.abs(blocks) ** 2, axis=(-3, -2, -1)) / self.purity

    def local_fid(self, u) -> np.ndarray:
        diag = np.einsum("...ik,ij,...jk->...k", u.conj(), self.ra, u).real
        return np.sum(diag**2, axis=-1) / self.purity_a

    def delta(self, u) -> np.ndarray:
        return self.local_fid(u) - self.global_fid(u)

    def objective(self, kind: str):
        return self.delta if kind == "delta" else self.global_fid


@dataclass(frozen=True)
class OptimizerSettings:
    grid_theta: int = 64
    grid_phi: int = 128
    maxiter: int = 200
    tol: float = 1e-9
    starts: int = 32
    seed: int = 0
    start_maxiter: int = 300
    givens_maxiter: int = 2000


class Optimum(NamedTuple):
    value: float
    measurement: ProjectiveMeasurement


def _minimize_qubit(land: _Landscape, kind: str, opts: OptimizerSettings):
    f = land.objective(kind)
    theta = np.linspace(0.0, math.pi, opts.grid_theta)
    phi = np.linspace(0.0, 2 * math.pi, opts.grid_phi, endpoint=False)
    tt, pp = np.meshgrid(theta, phi, indexing="ij")
    vals = f(_bloch_bases(tt, pp))
    idx = np.unravel_index(int(np.argmin(vals)), vals.shape)
    x0 = np.array([theta[idx[0]], phi[idx[1]]])

    def scalar(x):
        return float(f(bloch_basis(x[0], x[1])))

    res = minimize(scalar, x0, method="Nelder-Mead",
                   options={"maxiter": opts.maxiter, "xatol": opts.tol, "fatol": opts.tol})
    best = (float(vals[idx]), tuple(x0))
    if res.fun < best[0]:
        best = (float(res.fun), tuple(float(v) for v in res.x))
    theta_b, phi_b = best[1]
    return ProjectiveMeasurement.from_basis(bloch_basis(theta_b, phi_b), angles=(theta_b, phi_b))


def _minimize_givens(land: _Landscape, kind: str, opts: OptimizerSettings, base=None, pairs=None):
    d = land.da
    base = np.eye(d, dtype=complex) if base is None else base
    if pairs is None:
        pairs = [(i, j) for i in range(d) for j in range(i + 1, d)]
    f = land.objective(kind)
    if not pairs:
        return ProjectiveMeasurement.from_basis(base, angles=())

    def scalar(x):
        return float(f(base @ givens_unitary(x, d, pairs)))

    rng = np.random.default_rng(opts.seed)
    best_val, best_x = math.inf, None
    # short runs from every start, then polish the winner
    for _ in range(opts.starts):
        x0 = np.column_stack([rng.uniform(0, math.pi / 2, len(pairs)),
                              rng.uniform(0, 2 * math.pi, len(pairs))]).ravel()
        res = minimize(scalar, x0, method="Nelder-Mead",
                       options={"maxiter": opts.start_maxiter, "xatol": 1e-6, "fatol": 1e-9})
        if res.fun < best_val:
            best_val, best_x = float(res.fun), res.x
    res = minimize(scalar, best_x, method="Nelder-Mead",
                   options={"maxiter": opts.givens_maxiter, "xatol": opts.tol, "fatol": opts.tol})
    if res.fun < best_val:
        best_val, best_x = float(res.fun), res.x
    u = base @ givens_unitary(best_x, d, pairs)
    return ProjectiveMeasurement.from_basis(u, angles=tuple(float(v) for v in best_x))


def _optimal_measurement(rho, kind: str, opts: OptimizerSettings | None):
    opts = OptimizerSettings() if opts is None else opts
    land = _Landscape(rho)
    if land.da == 2:
        return _minimize_qubit(land, kind, opts)
    if land.da in (3, 4):
        return _minimize_givens(land, kind, opts)
    raise DimensionError(f"measurement optimisation supports d_a in {{2, 3, 4}}, got {land.da}")


def quantum_correlation(rho, opts: OptimizerSettings | None = None) -> Optimum:
    """min over von Neumann measurements on a of delta_coherence.

    Tiny negative values (above -1e-8) from optimiser noise are reported as 0;
    anything more negative is returned as is.
    """
    meas = _optimal_measurement(rho, "delta", opts)
    value = delta_coherence(rho, meas)
    if -NEGATIVE_NOISE < value < 0:
        value = 0.0
    return Optimum(value, meas)


def fmin(rho, opts: OptimizerSettings | None = None, constrained: bool = False) -> Optimum:
    """1 - min_Pi F(rho, Pi(rho)).

    With ``constrained`` only measurements that leave rho_a invariant are
    considered: eigenbases of rho_a, free within degenerate eigenspaces.
    """
    if not constrained:
        meas = _optimal_measurement(rho, "fidelity", opts)
    else:
        opts = OptimizerSettings() if opts is None else opts
        land = _Landscape(rho)
        if land.da > 4:
            raise DimensionError(f"measurement optimisation supports d_a in {{2, 3, 4}}, got {land.da}")
        w, v = eig_hermitian(land.ra)
        pairs = [(i, j) for i in range(land.da) for j in range(i + 1, land.da)
                 if abs(w[i] - w[j]) < 1e-8]
        meas = _minimize_givens(land, "fidelity", opts, base=v, pairs=pairs)
    m, da, db = _bip(rho)
    value = 1.0 - fidelity(m, dephase(m, meas.projectors, (da, db)))
    return Optimum(max(value, 0.0) if value > -NEGATIVE_NOISE else value, meas)


# --------------------------------------------------------------------------- #
# Weak measurement                                                            #
# --------------------------------------------------------------------------- #

@dataclass(frozen=True, eq=False)
class WeakMeasurement:
    """Two-outcome measurement of strength x built from a projector dichotomy.

    Omega_x = t1 P1 + t2 P2 and Omega_-x = t1 P2 + t2 P1 with
    t1,2 = sqrt((1 +- tanh x) / 2).
    """

    strength: float
    dichotomy: tuple
    basis: np.ndarray | None = None

    def __post_init__(self):
        p1, p2 = (as_matrix(p) for p in self.dichotomy)
        d = p1.shape[0]
        if p1.shape != p2.shape:
            raise DimensionError("dichotomy projectors must have the same shape")
        for p in (p1, p2):
            if np.max(np.abs(p @ p - p)) > PROJECTOR_TOL or np.max(np.abs(p - dag(p))) > PROJECTOR_TOL:
                raise ValueError("dichotomy entries must be orthogonal projectors")
        if np.max(np.abs(p1 + p2 - np.eye(d))) > PROJECTOR_TOL:
            raise ValueError("dichotomy projectors must sum to the identity")
        object.__setattr__(self, "dichotomy", (p1, p2))

    @property
    def dim(self) -> int:
        return self.dichotomy[0].shape[0]

    @property
    def t1(self) -> float:
        return math.sqrt((1 + math.tanh(self.strength)) / 2)

    @property
    def t2(self) -> float:
        return math.sqrt((1 - math.tanh(self.strength)) / 2)

    @property
    def t(self) -> float:
        """2 t1 t2 = sech x."""
        return 1.0 / math.cosh(self.strength)

    def operators(self) -> tuple[np.ndarray, np.ndarray]:
        p1, p2 = self.dichotomy
        return self.t1 * p1 + self.t2 * p2, self.t1 * p2 + self.t2 * p1

    def projective(self) -> ProjectiveMeasurement:
        """The strong-limit measurement {P1, P2}."""
        return ProjectiveMeasurement(self.dim, self.dichotomy)


def weak_measurement(x: float, d: int, k: int, basis=None) -> WeakMeasurement:
    """Dichotomy P1 = first ``k`` basis projectors, P2 = the rest."""
    if not 1 <= k < d:
        raise ValueError(f"dichotomy size k must satisfy 1 <= k < {d}, got {k}")
    u = np.eye(d, dtype=complex) if basis is None else as_matrix(basis)
    p1 = u[:, :k] @ dag(u[:, :k])
    return WeakMeasurement(float(x), (p1, np.eye(d) - p1), u)


def _check_weak(w: WeakMeasurement, da: int):
    if w.dim != da:
        raise DimensionError(f"weak measurement on dimension {w.dim} applied to subsystem of dimension {da}")


def weak_apply(rho, w: WeakMeasurement) -> BipartiteState:
    """sum_{j = +-x} (Omega_j (x) I) rho (Omega_j (x) I)."""
    m, da, db = _bip(rho)
    _check_weak(w, da)
    if w.strength == 0:
        # Omega_+-0 = I/sqrt(2); skip the arithmetic so the identity map is exact
        return BipartiteState(m, (da, db))
    eye = np.eye(db)
    out = np.zeros_like(m)
    for om in w.operators():
        big = np.kron(om, eye)
        out += big @ m @ dag(big)
    return BipartiteState(out, (da, db))


def strong_limit(rho, w: WeakMeasurement) -> np.ndarray:
    """Pi(rho) for the dichotomy, the x -> infinity image."""
    m, da, db = _bip(rho)
    _check_weak(w, da)
    return dephase(m, w.dichotomy, (da, db))


def weak_interpolation(rho, w: WeakMeasurement) -> np.ndarray:
    """t rho + (1 - t) Pi(rho) with t = sech x."""
    m = as_matrix(rho)
    t = w.t
    return t * m + (1 - t) * strong_limit(rho, w)


def weak_fidelity(rho, w: WeakMeasurement) -> float:
    return fidelity(as_matrix(rho), as_matrix(weak_apply(rho, w)))


def weak_fidelity_zeta(rho, w: WeakMeasurement) -> float:
    """tr[rho Omega] / (tr rho^2 (t + (1 - t) zeta)), zeta = tr[rho Pi(rho)] / tr[rho Omega]."""
    m = as_matrix(rho)
    om = as_matrix(weak_apply(rho, w))
    ro = np.vdot(m, om).real
    zeta = np.vdot(m, strong_limit(rho, w)).real / ro
    t = w.t
    return float(ro / (linear_purity(m) * (t + (1 - t) * zeta)))


def weak_fidelity_limit(rho, w: WeakMeasurement) -> float:
    """tr[rho Pi(rho)] / tr rho^2."""
    m = as_matrix(rho)
    return float(np.vdot(m, strong_limit(rho, w)).real / linear_purity(m))


def weak_purity(rho, w: WeakMeasurement) -> float:
    """log_d(d tr[t^2 rho^2 + (1 - t^2) rho Pi(rho)]), the fidelity purity of Omega(rho)."""
    m = as_matrix(rho)
    d = m.shape[0]
    if d == 1:
        return 0.0
    t = w.t
    inner = t * t * linear_purity(m) + (1 - t * t) * np.vdot(m, strong_limit(rho, w)).real
    return math.log(d * inner) / math.log(d)


def weak_purity_limits(rho, w: WeakMeasurement) -> tuple[float, float]:
    """(x -> 0, x -> infinity) limits of weak_purity: P_F(rho) and log_d(d tr[rho Pi(rho)])."""
    m = as_matrix(rho)
    d = m.shape[0]
    strong = np.vdot(m, strong_limit(rho, w)).real
    return fidelity_purity(m), math.log(d * strong) / math.log(d)
