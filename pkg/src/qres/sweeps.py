"""Purity curves for the Bell-diagonal and Werner families.

Each row is (param, fidelity_purity, linear_purity) computed from the
constructed density matrix. For Werner states the closed form
(4y^2 - 2y + 1)/9 that circulates for tr rho_W^2 does not match the matrix;
:func:`werner_closed_form_gap` quantifies the disagreement.
"""
from __future__ import annotations

import io

import numpy as np

from .purity import fidelity_purity, linear_purity
from .states import bell_diagonal, werner

CSV_HEADER = "param,fidelity_purity,linear_purity"
DEFAULT_RANGES = {"bell": (0.0, 1.0), "werner": (-1.0, 1.0)}
DEFAULT_STEPS = 201


def parameter_grid(start: float, stop: float, steps: int) -> np.ndarray:
    if steps < 2:
        raise ValueError(f"--steps must be at least 2, got {steps}")
    if not start < stop:
        raise ValueError(f"--from ({start}) must be smaller than --to ({stop})")
    return np.linspace(start, stop, steps)


def bell_sweep(start: float = 0.0, stop: float = 1.0, steps: int = DEFAULT_STEPS) -> list[tuple]:
    """Bell-diagonal states with c1 = c2 = c3 = -c."""
    rows = []
    for c in parameter_grid(start, stop, steps):
        rho = bell_diagonal(-c, -c, -c)
        rows.append((float(c), fidelity_purity(rho), linear_purity(rho)))
    return rows


def werner_sweep(d: int = 2, start: float = -1.0, stop: float = 1.0, steps: int = DEFAULT_STEPS) -> list[tuple]:
    rows = []
    for y in parameter_grid(start, stop, steps):
        rho = werner(d, float(y))
        rows.append((float(y), fidelity_purity(rho), linear_purity(rho)))
    return rows


def werner_closed_form(y: float) -> float:
    """The (4y^2 - 2y + 1)/9 expression for tr rho_W^2; kept for comparison only."""
    return (4 * y * y - 2 * y + 1) / 9


def werner_linear_purity_exact(d: int, y: float) -> float:
    """tr rho_W^2 from F^2 = I, tr I = d^2 and tr F = d."""
    a = (d - y) / (d**3 - d)
    b = (y * d - 1) / (d**3 - d)
    return a * a * d * d + 2 * a * b * d + b * b * d * d


def werner_closed_form_gap(rows) -> tuple[float, float]:
    """(max |closed form - matrix value|, parameter where it occurs)."""
    worst, at = 0.0, float("nan")
    for y, _, lin in rows:
        gap = abs(werner_closed_form(y) - lin)
        if gap > worst:
            worst, at = gap, y
    return worst, at


def _fmt(x: float) -> str:
    x = float(x) + 0.0  # no negative zero
    return repr(x)


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    for row in rows:
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    return buf.getvalue()
