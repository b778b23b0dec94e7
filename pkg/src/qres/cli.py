"""Command-line front end: ``qres measure | sweep | harness``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import coherence, measurement, purity, sweeps
from .harness import SUITES, run_harness
from .linalg import DimensionError
from .states import BipartiteState, ValidationError, load_state

EXIT_INVALID = 2
EXIT_UNSUPPORTED_DIM = 3

MEASURES = (
    "linear-purity", "hs-purity", "fidelity-purity", "coherence-f", "coherence-l1",
    "max-coherence", "tau", "qcorr", "fmin", "weak-fidelity", "weak-purity",
)


class UsageError(Exception):
    pass


def _as_bipartite(rho) -> BipartiteState:
    if isinstance(rho, BipartiteState):
        return rho
    return BipartiteState(np.asarray(rho), (rho.dim, 1))


def _measurement_detail(meas: measurement.ProjectiveMeasurement) -> dict:
    detail = {"basis": [[[float(z.real), float(z.imag)] for z in row] for row in meas.basis]}
    if meas.angles is not None:
        detail["angles"] = [float(a) for a in meas.angles]
        if meas.subsystem_dim == 2:
            detail["parametrization"] = "bloch(theta, phi)"
        else:
            detail["parametrization"] = "givens(theta_ij, phi_ij) over pairs i<j"
    return detail


def evaluate(rho, name: str, x: float = 1.0, dichotomy: int = 1, constrained: bool = False):
    """Value of measure ``name`` and an optional detail dict."""
    if name == "linear-purity":
        return purity.linear_purity(rho), None
    if name == "hs-purity":
        return purity.hs_purity(rho), None
    if name == "fidelity-purity":
        return purity.fidelity_purity(rho), None
    if name == "coherence-f":
        return coherence.coherence_fidelity(rho), None
    if name == "coherence-l1":
        return coherence.coherence_l1(rho), None
    if name == "max-coherence":
        return coherence.maximal_coherence(rho), None
    if name == "tau":
        if rho.dim == 1:
            raise DimensionError("tau needs dimension at least 2")
        return coherence.tau_classifier(rho), None
    bip = _as_bipartite(rho)
    if name in ("qcorr", "fmin"):
        if name == "qcorr":
            value, meas = measurement.quantum_correlation(bip)
        else:
            value, meas = measurement.fmin(bip, constrained=constrained)
        return value, {"measurement": _measurement_detail(meas)}
    if name in ("weak-fidelity", "weak-purity"):
        da = bip.dims[0]
        if not 1 <= dichotomy < da:
            raise UsageError(f"--dichotomy must satisfy 1 <= k < d_a = {da}, got {dichotomy}")
        w = measurement.weak_measurement(x, da, dichotomy)
        fn = measurement.weak_fidelity if name == "weak-fidelity" else measurement.weak_purity
        return fn(bip, w), {"x": x, "dichotomy": dichotomy, "t": w.t}
    raise UsageError(f"--name must be one of {', '.join(MEASURES)}, got {name!r}")


def format_value(v: float) -> str:
    return f"{float(v) + 0.0:#.12g}"


def cmd_measure(args) -> int:
    rho = load_state(args.state)
    value, detail = evaluate(rho, args.name, args.x, args.dichotomy, args.constrained)
    print(format_value(value))
    if args.json:
        payload = {"name": args.name, "value": float(value)}
        if detail:
            payload.update(detail)
        print(json.dumps(payload))
    return 0


def cmd_sweep(args) -> int:
    lo, hi = sweeps.DEFAULT_RANGES[args.family]
    start = lo if args.start is None else args.start
    stop = hi if args.stop is None else args.stop
    if args.family == "bell":
        rows = sweeps.bell_sweep(start, stop, args.steps)
    else:
        rows = sweeps.werner_sweep(args.d, start, stop, args.steps)
    text = sweeps.rows_to_csv(rows)
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.family == "werner":
        gap, at = sweeps.werner_closed_form_gap(rows)
        print(
            f"note: purities are computed from the constructed Werner matrix (d={args.d}). "
            f"The closed form tr rho^2 = (4y^2 - 2y + 1)/9 differs from it by up to {gap:.6g} "
            f"(at y = {at:.6g}); e.g. y = -1 is the pure singlet for d = 2 (tr rho^2 = 1, not 7/9).",
            file=sys.stderr,
        )
    return 0


def cmd_harness(args) -> int:
    report = run_harness(args.suite, args.trials, args.seed)
    text = report.format()
    sys.stdout.write(text)
    if args.out:
        Path(args.out).write_text(text)
    return report.exit_code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_INVALID)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qres", description="Fidelity-based purity, coherence and correlation measures.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    m = sub.add_parser("measure", help="evaluate a measure on a JSON state")
    m.add_argument("--state", required=True, help="JSON state file")
    m.add_argument("--name", required=True, choices=MEASURES)
    m.add_argument("--x", type=float, default=1.0, help="weak measurement strength")
    m.add_argument("--dichotomy", type=int, default=1, help="first k basis vectors of a form P1")
    m.add_argument("--constrained", action="store_true", help="fmin over measurements leaving rho_a invariant")
    m.add_argument("--json", action="store_true", help="also print a JSON line with details")
    m.set_defaults(func=cmd_measure)

    s = sub.add_parser("sweep", help="purity curves for Bell-diagonal or Werner states (CSV)")
    s.add_argument("--family", required=True, choices=("bell", "werner"))
    s.add_argument("--d", type=int, default=2, help="Werner local dimension")
    s.add_argument("--from", dest="start", type=float, default=None)
    s.add_argument("--to", dest="stop", type=float, default=None)
    s.add_argument("--steps", type=int, default=sweeps.DEFAULT_STEPS)
    s.add_argument("--out", default=None, help="CSV path (default stdout)")
    s.set_defaults(func=cmd_sweep)

    h = sub.add_parser("harness", help="run the randomised property harness")
    h.add_argument("--suite", default="all", choices=SUITES + ("all",))
    h.add_argument("--trials", type=int, default=500)
    h.add_argument("--seed", type=int, default=0)
    h.add_argument("--out", default=None, help="also write the text report here")
    h.set_defaults(func=cmd_harness)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: invalid state, violated invariant {exc}", file=sys.stderr)
        return EXIT_INVALID
    except DimensionError as exc:
        print(f"error: unsupported dimension: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED_DIM
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
