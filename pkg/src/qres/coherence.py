"""Coherence in the computational basis.

The fidelity-based monotone is 1 - max_delta F(rho, delta) over diagonal
states delta. For diagonal delta the ratio fidelity is
(sum_i delta_i rho_ii)^2 / (tr rho^2 sum_i delta_i^2), which by Cauchy-Schwarz
peaks at delta = diag(rho), giving 1 - sum_i rho_ii^2 / tr rho^2.
:func:`coherence_fidelity_search` finds the same maximum by brute force.
"""
from __future__ import annotations

from itertools import combinations

import numpy as np
from scipy.optimize import minimize

from .fidelity import fidelity
from .linalg import as_matrix, dag
from .purity import fidelity_purity, linear_purity
from .states import generator_basis


def in_basis(rho, u) -> np.ndarray:
    """Express ``rho`` in the orthonormal basis given by the columns of ``u``."""
    u = as_matrix(u)
    return dag(u) @ as_matrix(rho) @ u


def coherence_fidelity(rho) -> float:
    m = as_matrix(rho)
    diag = np.diag(m).real
    return max(1.0 - float(diag @ diag) / linear_purity(m), 0.0)


def simplex_grid(d: int, n: int) -> np.ndarray:
    """All points of the probability simplex with coordinates in {0, 1/n, ..., 1}."""
    # stars and bars: choose d-1 bar positions among n + d - 1 slots
    rows = []
    for bars in combinations(range(n + d - 1), d - 1):
        edges = (-1,) + bars + (n + d - 1,)
        rows.append([edges[i + 1] - edges[i] - 1 for i in range(d)])
    return np.array(rows, dtype=float) / n


def coherence_fidelity_search(rho, resolution: int | None = None) -> float:
    """Brute-force 1 - max F(rho, delta): simplex grid, then local Nelder-Mead.

    Default grid resolution is 1/200 for d <= 3 and 1/60 for d = 4.
    """
    m = as_matrix(rho)
    d = m.shape[0]
    if resolution is None:
        resolution = 200 if d <= 3 else 60 if d == 4 else 20
    r = np.diag(m).real
    purity = linear_purity(m)
    grid = simplex_grid(d, resolution)
    values = (grid @ r) ** 2 / (purity * np.sum(grid * grid, axis=1))
    best = int(np.argmax(values))
    start = grid[best]

    def objective(y):
        w = y * y
        s = w.sum()
        if s == 0:
            return 0.0
        return -fidelity(m, np.diag(w / s))

    res = minimize(objective, np.sqrt(start), method="Nelder-Mead",
                   options={"xatol": 1e-10, "fatol": 1e-15, "maxiter": 4000})
    top = max(values[best], -res.fun)
    return 1.0 - top


def coherence_l1(rho) -> float:
    m = as_matrix(rho)
    a = np.abs(m)
    return float(a.sum() - np.trace(a))


def coherence_l1_bloch(x, d: int) -> float:
    """sum_{i<=k} sqrt(x_i^2 + x_{i+k}^2) with k = (d^2 - d)/2 (generator ordering of states)."""
    x = np.asarray(x, dtype=float)
    k = (d * d - d) // 2
    return float(np.sum(np.hypot(x[:k], x[k:2 * k])))


def coherence_l1_from_state_bloch(rho) -> float:
    m = as_matrix(rho)
    basis = generator_basis(m.shape[0])
    x = np.einsum("ij,kji->k", m, basis.generators).real
    return coherence_l1_bloch(x, m.shape[0])


def maximal_coherence(rho) -> float:
    """sup over unitaries of the fidelity coherence: 1 - 1/(d tr rho^2)."""
    m = as_matrix(rho)
    return 1.0 - 1.0 / (m.shape[0] * linear_purity(m))


def maximal_coherence_from_purity(p_f: float, d: int) -> float:
    return 1.0 - float(d) ** (-p_f)


def purity_from_maximal_coherence(c_m: float, d: int) -> float:
    return float(np.log(1.0 / (1.0 - c_m)) / np.log(d))


def tau_classifier(rho) -> float:
    """Mean of fidelity purity and normalised l1 coherence; 0 for I/d, 1 for pure maximally coherent."""
    m = as_matrix(rho)
    d = m.shape[0]
    if d == 1:
        raise ValueError("tau is undefined for a one-dimensional state")
    return 0.5 * (fidelity_purity(m) + coherence_l1(m) / (d - 1))


def off_diagonal_mass(rho) -> float:
    m = as_matrix(rho)
    return float(np.max(np.abs(m - np.diag(np.diag(m))))) if m.size > 1 else 0.0
