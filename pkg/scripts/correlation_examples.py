"""Q_F and F-MIN on a few textbook two-qubit states."""
import numpy as np

from qres.measurement import fmin, quantum_correlation
from qres.states import BipartiteState, bell_diagonal, bell_state, classical_quantum, werner


def main():
    states = {
        "phi+": bell_state("phi+"),
        "bell-diagonal (-0.5,-0.5,-0.5)": bell_diagonal(-0.5, -0.5, -0.5),
        "werner d=2 y=-0.5": werner(2, -0.5),
        "classical-quantum": classical_quantum([0.4, 0.6], [np.diag([1.0, 0.0]), np.eye(2) / 2]),
        "product": BipartiteState(np.kron(np.diag([0.8, 0.2]), np.eye(2) / 2), (2, 2)),
    }
    print(f"{'state':<32} {'Q_F':>10} {'N_F':>10} {'N_F (rho_a fixed)':>18}")
    for name, rho in states.items():
        q = quantum_correlation(rho).value
        n = fmin(rho).value
        nc = fmin(rho, constrained=True).value
        print(f"{name:<32} {q:>10.6f} {n:>10.6f} {nc:>18.6f}")


if __name__ == "__main__":
    main()
