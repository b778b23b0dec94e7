"""Purity monotones: linear, Hilbert-Schmidt and fidelity-based."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import as_matrix


def linear_purity(rho) -> float:
    """tr(rho^2)."""
    m = as_matrix(rho)
    return float(np.vdot(m, m).real)


def hs_purity(rho) -> float:
    """tr(rho^2) - 1/d, i.e. ||rho - I/d||^2 in the Hilbert-Schmidt norm.

    This is also the Brukner-Zeilinger information of the state.
    """
    m = as_matrix(rho)
    return linear_purity(m) - 1 / m.shape[0]


brukner_zeilinger = hs_purity


def _log(x: float, base: float) -> float:
    return math.log(x) / math.log(base)


def fidelity_purity(rho, base: int | None = None) -> float:
    """-log_base F(rho, I/d) = log_base(d tr rho^2).

    ``base`` defaults to the dimension, which bounds the result in [0, 1].
    The one-dimensional state has purity 0 by convention.
    """
    m = as_matrix(rho)
    d = m.shape[0]
    if d == 1:
        return 0.0
    base = d if base is None else base
    if base < 2:
        raise ValueError(f"log base must be at least 2, got {base}")
    return _log(d * linear_purity(m), base)


def purity_from_gamma(gamma, d: int) -> float:
    """log_d(d ||gamma||^2) from a correlation matrix in an orthonormal operator basis."""
    if d == 1:
        return 0.0
    g = np.asarray(gamma, dtype=float)
    return _log(d * float(np.sum(g * g)), d)


@dataclass(frozen=True)
class PurityReport:
    linear: float
    hilbert_schmidt: float
    fidelity_purity: float
    log_base: int


def purity_report(rho, base: int | None = None) -> PurityReport:
    m = as_matrix(rho)
    d = m.shape[0]
    base = d if base is None else base
    return PurityReport(
        linear=linear_purity(m),
        hilbert_schmidt=hs_purity(m),
        fidelity_purity=fidelity_purity(m, base),
        log_base=base,
    )
