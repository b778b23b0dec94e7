"""Fidelity between quantum states.

``fidelity`` is the ratio form (tr rho sigma)^2 / (tr rho^2 tr sigma^2). It is
homogeneous of degree zero in each argument, so it is well defined on any
non-zero positive operator, normalised or not. ``fidelity_uhlmann`` is the
usual (tr sqrt(sqrt(sigma) rho sqrt(sigma)))^2.
"""
from __future__ import annotations

import numpy as np

from .linalg import DimensionError, as_matrix, psd_sqrt

ROUND_GUARD = 1e-12
ZERO_BLOCK = 1e-24  # squared HS norm below which a block counts as zero


def _pair(rho, sigma):
    a = as_matrix(rho)
    b = as_matrix(sigma)
    if a.shape != b.shape:
        raise DimensionError(f"states have different shapes {a.shape} and {b.shape}")
    return a, b


def _clamp(f: float) -> float:
    if -ROUND_GUARD < f < 0:
        return 0.0
    if 1 < f < 1 + ROUND_GUARD:
        return 1.0
    return f


def fidelity(rho, sigma) -> float:
    a, b = _pair(rho, sigma)
    overlap = max(np.vdot(a, b).real, 0.0)  # tr(a b) for Hermitian a; -1e-17 noise on disjoint supports
    norm = np.vdot(a, a).real * np.vdot(b, b).real
    if norm == 0:
        raise ValueError("fidelity is undefined for a zero operator")
    return _clamp(overlap**2 / norm)


fidelity_alt = fidelity


def fidelity_uhlmann(rho, sigma) -> float:
    a, b = _pair(rho, sigma)
    s = psd_sqrt(b)
    inner = s @ a @ s
    root = np.trace(psd_sqrt((inner + inner.conj().T) / 2)).real
    return _clamp(root**2)


def block_fidelity_sum(rho, sigma, projectors) -> float:
    """sum_i F(P_i rho P_i, P_i sigma P_i) over the given projectors.

    Blocks that vanish on both sides are skipped; a block that vanishes on
    one side only contributes 0.
    """
    a, b = _pair(rho, sigma)
    total = 0.0
    for p in projectors:
        p = as_matrix(p)
        ra = p @ a @ p
        sb = p @ b @ p
        if np.vdot(ra, ra).real < ZERO_BLOCK or np.vdot(sb, sb).real < ZERO_BLOCK:
            continue
        total += fidelity(ra, sb)
    return total
