"""Randomised property harness.

Every property is a function ``check(rng) -> deviation`` evaluated on
independent seeded trials; a trial violates the property when its deviation
exceeds the tolerance. ``guaranteed`` properties decide the exit status,
``probe`` properties are falsification experiments that are only reported.

Trial ``i`` of a run with base seed ``s`` uses ``default_rng(s * 1_000_000 + i)``,
so any logged seed reproduces its counterexample on its own.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import channels as ch
from .coherence import (
    coherence_fidelity,
    coherence_fidelity_search,
    coherence_l1,
    coherence_l1_from_state_bloch,
    maximal_coherence,
    purity_from_maximal_coherence,
    tau_classifier,
)
from .fidelity import block_fidelity_sum, fidelity
from .linalg import dag, random_unitary
from .measurement import (
    LARGE_STRENGTH,
    ProjectiveMeasurement,
    apply_measurement,
    delta_coherence,
    fmin,
    quantum_correlation,
    strong_limit,
    weak_apply,
    weak_fidelity,
    weak_fidelity_limit,
    weak_fidelity_zeta,
    weak_interpolation,
    weak_measurement,
    weak_purity,
    weak_purity_limits,
)
from .purity import fidelity_purity, hs_purity, linear_purity, purity_from_gamma
from .states import (
    BipartiteState,
    bell_diagonal,
    classical_quantum,
    correlation_matrix,
    random_density_matrix,
)

SUITES = ("fidelity", "purity", "coherence", "correlation", "weak")
PROBE_MIN_TRIALS = 1000
MAX_LOGGED = 10


@dataclass
class PropertyResult:
    suite: str
    name: str
    kind: str
    tolerance: float
    trials: int = 0
    max_deviation: float = 0.0
    violations: list = field(default_factory=list)  # (seed, deviation)
    seconds: float = 0.0

    @property
    def n_violations(self) -> int:
        return len(self.violations)

    @property
    def passed(self) -> bool:
        return not self.violations


@dataclass
class HarnessReport:
    seed: int
    trials: int
    results: list

    @property
    def guaranteed_ok(self) -> bool:
        return all(r.passed for r in self.results if r.kind == "guaranteed")

    @property
    def exit_code(self) -> int:
        return 0 if self.guaranteed_ok else 1

    def result(self, name: str) -> PropertyResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    def format(self) -> str:
        lines = [
            f"property harness: base seed {self.seed}, {self.trials} trials per property "
            f"(probes at least {PROBE_MIN_TRIALS})",
            "",
            f"{'suite':<12} {'property':<34} {'kind':<10} {'tol':>8} {'trials':>7} "
            f"{'viol':>6} {'max_dev':>10}  status",
        ]
        for r in self.results:
            status = "pass" if r.passed else ("FAIL" if r.kind == "guaranteed" else "violated")
            lines.append(
                f"{r.suite:<12} {r.name:<34} {r.kind:<10} {r.tolerance:>8.0e} {r.trials:>7} "
                f"{r.n_violations:>6} {r.max_deviation:>10.3e}  {status}"
            )
        lines += ["", "counterexample log (first seeds per property; deviation beyond tolerance):"]
        logged = False
        for r in self.results:
            if r.violations:
                logged = True
                seeds = ", ".join(f"{s} ({dev:.3e})" for s, dev in r.violations[:MAX_LOGGED])
                more = f" ... +{r.n_violations - MAX_LOGGED} more" if r.n_violations > MAX_LOGGED else ""
                lines.append(f"  {r.suite}/{r.name}: {seeds}{more}")
        if not logged:
            lines.append("  (none)")
        lines += ["", f"guaranteed properties: {'all pass' if self.guaranteed_ok else 'FAILURES'}"]
        return "\n".join(lines) + "\n"


def trial_seed(seed: int, i: int) -> int:
    return seed * 1_000_000 + i


def run_property(suite, name, kind, tol, check: Callable, trials: int, seed: int) -> PropertyResult:
    res = PropertyResult(suite, name, kind, tol)
    start = time.perf_counter()
    for i in range(trials):
        s = trial_seed(seed, i)
        dev = float(check(np.random.default_rng(s)))
        if math.isnan(dev):
            dev = math.inf
        res.max_deviation = max(res.max_deviation, dev)
        if dev > tol:
            res.violations.append((s, dev))
    res.trials = trials
    res.seconds = time.perf_counter() - start
    return res


# --------------------------------------------------------------------------- #
# Samplers                                                                    #
# --------------------------------------------------------------------------- #

def _state(rng, d=None, dims=(2, 3, 4)) -> np.ndarray:
    d = int(rng.choice(dims)) if d is None else d
    rank = int(rng.integers(1, d + 1))
    return random_density_matrix(d, rank, rng)


def _bipartite(rng, da=2, db=None) -> BipartiteState:
    db = int(rng.integers(2, 4)) if db is None else db
    rank = int(rng.integers(1, da * db + 1))
    return BipartiteState(random_density_matrix(da * db, rank, rng), (da, db))


def _pure_vector(rng, d) -> np.ndarray:
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def _cq_state(rng, da=2, db=2) -> BipartiteState:
    p = rng.dirichlet(np.ones(da))
    blocks = [random_density_matrix(db, int(rng.integers(1, db + 1)), rng) for _ in range(da)]
    return classical_quantum(p, blocks)


# --------------------------------------------------------------------------- #
# Fidelity                                                                    #
# --------------------------------------------------------------------------- #

def _f1(rng):
    rho = _state(rng)
    sigma = random_density_matrix(rho.shape[0], int(rng.integers(1, rho.shape[0] + 1)), rng)
    f = fidelity(rho, sigma)
    return max(-f, f - 1, abs(fidelity(rho, rho) - 1))


def _f2(rng):
    rho = _state(rng)
    sigma = random_density_matrix(rho.shape[0], None, rng)
    return abs(fidelity(rho, sigma) - fidelity(sigma, rho))


def _f3(rng):
    rho = _state(rng)
    d = rho.shape[0]
    sigma = random_density_matrix(d, None, rng)
    u = random_unitary(d, rng)
    return abs(fidelity(u @ rho @ dag(u), u @ sigma @ dag(u)) - fidelity(rho, sigma))


def _f4(rng):
    rho = _state(rng)
    psi = _pure_vector(rng, rho.shape[0])
    overlap = (psi.conj() @ rho @ psi).real
    return abs(fidelity(rho, np.outer(psi, psi.conj())) - overlap / linear_purity(rho))


def _f4_squared(rng):
    rho = _state(rng)
    psi = _pure_vector(rng, rho.shape[0])
    overlap = (psi.conj() @ rho @ psi).real
    return abs(fidelity(rho, np.outer(psi, psi.conj())) - overlap**2 / linear_purity(rho))


def _f5(rng):
    r1, s1 = random_density_matrix(2, None, rng), random_density_matrix(2, None, rng)
    r2, s2 = random_density_matrix(2, None, rng), random_density_matrix(2, None, rng)
    return abs(fidelity(np.kron(r1, r2), np.kron(s1, s2)) - fidelity(r1, s1) * fidelity(r2, s2))


def _f6(rng):
    rho = _state(rng)
    d = rho.shape[0]
    sigma = random_density_matrix(d, None, rng)
    eye = np.eye(d)
    projectors = [np.outer(eye[i], eye[i]) for i in range(d)]
    lhs = fidelity(sum(p @ rho @ p for p in projectors), sum(p @ sigma @ p for p in projectors))
    return abs(lhs - block_fidelity_sum(rho, sigma, projectors))


def fidelity_suite(trials, seed):
    return [
        run_property("fidelity", "F1 bounds, F(rho,rho)=1", "guaranteed", 1e-10, _f1, trials, seed),
        run_property("fidelity", "F2 symmetry", "guaranteed", 0.0, _f2, trials, seed),
        run_property("fidelity", "F3 unitary invariance", "guaranteed", 1e-10, _f3, trials, seed),
        run_property("fidelity", "F4 pure form <psi|rho|psi>/tr rho^2", "guaranteed", 1e-10, _f4, trials, seed),
        run_property("fidelity", "F4' squared form", "probe", 1e-10, _f4_squared, trials, seed),
        run_property("fidelity", "F5 tensor multiplicativity", "guaranteed", 1e-10, _f5, trials, seed),
        run_property("fidelity", "F6 block additivity", "guaranteed", 1e-10, _f6, trials, seed),
    ]


def check_f_properties(seed: int = 0, trials: int = 1000) -> HarnessReport:
    return HarnessReport(seed, trials, fidelity_suite(trials, seed))


# --------------------------------------------------------------------------- #
# Purity                                                                      #
# --------------------------------------------------------------------------- #

def _p1(rng):
    d = int(rng.choice((2, 3, 4)))
    a = random_density_matrix(d, int(rng.integers(1, d + 1)), rng)
    b = random_density_matrix(d, int(rng.integers(1, d + 1)), rng)
    if linear_purity(a) > linear_purity(b):
        a, b = b, a
    return max(0.0, fidelity_purity(a) - fidelity_purity(b))


def _p2(rng):
    p = fidelity_purity(_state(rng))
    return max(0.0, -p, p - 1)


def _p3(rng):
    d = int(rng.choice((2, 3, 4)))
    rho = random_density_matrix(d, int(rng.integers(1, d + 1)), rng)
    channel = ch.random_unital_channel(d, rng)
    return max(0.0, fidelity_purity(channel(rho)) - fidelity_purity(rho))


def _unital(rng):
    d = int(rng.choice((2, 3, 4)))
    channel = ch.random_unital_channel(d, rng)
    eye = np.eye(d) / d
    return float(np.max(np.abs(channel(eye) - eye)))


def _p4(rng):
    d = int(rng.choice((2, 3)))
    rho, sigma = _state(rng, d), _state(rng, d)
    return abs(fidelity_purity(np.kron(rho, sigma), base=d) - fidelity_purity(rho) - fidelity_purity(sigma))


def _normalization(rng):
    d = int(rng.integers(2, 9))
    psi = _pure_vector(rng, d)
    return abs(fidelity_purity(np.outer(psi, psi.conj()), base=2) - math.log2(d))


def _gamma_route(rng):
    da, db = int(rng.integers(2, 4)), int(rng.integers(2, 4))
    rho = _bipartite(rng, da, db)
    return abs(purity_from_gamma(correlation_matrix(rho), da * db) - fidelity_purity(rho))


def _hs(rng):
    rho = _state(rng)
    diff = rho - np.eye(rho.shape[0]) / rho.shape[0]
    return abs(hs_purity(rho) - np.vdot(diff, diff).real)


def purity_suite(trials, seed):
    return [
        run_property("purity", "P1 monotone in tr rho^2", "guaranteed", 1e-12, _p1, trials, seed),
        run_property("purity", "P2 bounds [0,1]", "guaranteed", 1e-12, _p2, trials, seed),
        run_property("purity", "P3 unital monotonicity", "guaranteed", 1e-10, _p3, trials, seed),
        run_property("purity", "unitality of free operations", "guaranteed", 1e-10, _unital, trials, seed),
        run_property("purity", "P4 additivity", "guaranteed", 1e-10, _p4, trials, seed),
        run_property("purity", "normalization log2 d", "guaranteed", 1e-12, _normalization, trials, seed),
        run_property("purity", "correlation-matrix route", "guaranteed", 1e-10, _gamma_route, trials, seed),
        run_property("purity", "HS purity = ||rho - I/d||^2", "guaranteed", 1e-12, _hs, trials, seed),
    ]


# --------------------------------------------------------------------------- #
# Coherence                                                                   #
# --------------------------------------------------------------------------- #

def _closed_vs_search(rng):
    d = int(rng.choice((2, 3, 4)))
    rho = _state(rng, d)
    return abs(coherence_fidelity(rho) - coherence_fidelity_search(rho))


def _maximal_bound(rng):
    rho = _state(rng)
    return max(0.0, coherence_fidelity(rho) - maximal_coherence(rho))


def _purity_link(rng):
    rho = _state(rng)
    return abs(fidelity_purity(rho) - purity_from_maximal_coherence(maximal_coherence(rho), rho.shape[0]))


def _l1_bloch(rng):
    rho = _state(rng)
    return abs(coherence_l1(rho) - coherence_l1_from_state_bloch(rho))


def _c1(rng):
    rho = _state(rng)
    d = rho.shape[0]
    diag = np.diag(rng.dirichlet(np.ones(d))).astype(complex)
    return max(0.0, -coherence_fidelity(rho), abs(coherence_fidelity(diag)))


def _tau_bounds(rng):
    t = tau_classifier(_state(rng))
    return max(0.0, -t, t - 1)


def _c2(rng):
    d = int(rng.choice((2, 3, 4)))
    rho = _state(rng, d)
    channel = ch.sample_incoherent_channel(d, int(rng.integers(1, 5)), rng)
    return max(0.0, coherence_fidelity(channel(rho)) - coherence_fidelity(rho))


def _c3(rng):
    d = int(rng.choice((2, 3, 4)))
    rho = _state(rng, d)
    channel = ch.sample_incoherent_channel(d, int(rng.integers(1, 5)), rng)
    avg = 0.0
    for a in channel.kraus:
        out = a @ rho @ dag(a)
        p = np.trace(out).real
        if p > 1e-14:
            avg += p * coherence_fidelity(out / p)
    return max(0.0, avg - coherence_fidelity(rho))


def coherence_suite(trials, seed):
    probe_trials = max(trials, PROBE_MIN_TRIALS)
    return [
        run_property("coherence", "closed form vs simplex search", "guaranteed", 1e-6,
                     _closed_vs_search, min(trials, 150), seed),
        run_property("coherence", "C1 non-negativity", "guaranteed", 1e-12, _c1, trials, seed),
        run_property("coherence", "C_m >= C_F", "guaranteed", 1e-12, _maximal_bound, trials, seed),
        run_property("coherence", "P_F = log_d 1/(1 - C_m)", "guaranteed", 1e-12, _purity_link, trials, seed),
        run_property("coherence", "l1 from generator pairs", "guaranteed", 1e-10, _l1_bloch, trials, seed),
        run_property("coherence", "tau in [0,1]", "guaranteed", 1e-12, _tau_bounds, trials, seed),
        run_property("coherence", "C2 incoherent-channel monotonicity", "probe", 1e-9, _c2, probe_trials, seed),
        run_property("coherence", "C3 strong monotonicity", "probe", 1e-9, _c3, probe_trials, seed),
    ]


# --------------------------------------------------------------------------- #
# Correlation                                                                 #
# --------------------------------------------------------------------------- #

def _q1_cq(rng):
    return abs(quantum_correlation(_cq_state(rng)).value)


def _q1_nonneg(rng):
    return max(0.0, -quantum_correlation(_bipartite(rng)).value)


def _q2(rng):
    rho = _bipartite(rng)
    da, db = rho.dims
    u = np.kron(random_unitary(da, rng), random_unitary(db, rng))
    rotated = BipartiteState(u @ np.asarray(rho) @ dag(u), rho.dims)
    return abs(quantum_correlation(rotated).value - quantum_correlation(rho).value)


def _post_measurement_purity(rng):
    rho = _bipartite(rng, int(rng.integers(2, 4)))
    meas = ProjectiveMeasurement.from_basis(random_unitary(rho.dims[0], rng))
    return max(0.0, fidelity_purity(apply_measurement(rho, meas)) - fidelity_purity(rho))


def _delta_identity(rng):
    c1, c2 = rng.uniform(-1, 1, 2)
    # |c1| + |c2| <= 1 keeps (c1, c2, 0) physical
    scale = max(1.0, abs(c1) + abs(c2))
    rho = bell_diagonal(c1 / scale, c2 / scale, 0.0)
    meas = ProjectiveMeasurement.computational(2)
    ra = np.eye(2) / 2
    expected = 2.0 ** (-fidelity_purity(ra)) - 4.0 ** (-fidelity_purity(rho))
    return abs(delta_coherence(rho, meas) - expected)


def _fmin_inequality(rng):
    rho = _bipartite(rng, int(rng.integers(2, 4)))
    meas = ProjectiveMeasurement.from_basis(random_unitary(rho.dims[0], rng))
    d = rho.dim
    m = np.asarray(rho)
    return max(0.0, fidelity(m, np.eye(d) / d) - fidelity(m, np.asarray(apply_measurement(rho, meas))))


def _cm_bounds_fmin(rng):
    rho = _bipartite(rng)
    return max(0.0, fmin(rho).value - maximal_coherence(rho))


def _q3(rng):
    rho = _bipartite(rng, 2, 2)
    channel = ch.local_channel(ch.random_channel(2, int(rng.integers(1, 4)), rng), rho.dims, "b")
    out = BipartiteState(channel(rho), rho.dims)
    return max(0.0, quantum_correlation(out).value - quantum_correlation(rho).value)


def correlation_suite(trials, seed):
    probe_trials = max(trials, PROBE_MIN_TRIALS)
    return [
        run_property("correlation", "Q1 Q_F(classical-quantum) = 0", "guaranteed", 1e-6, _q1_cq, trials, seed),
        run_property("correlation", "Q1 Q_F >= 0", "guaranteed", 1e-8, _q1_nonneg, trials, seed),
        run_property("correlation", "Q2 local-unitary invariance", "guaranteed", 1e-6, _q2, trials, seed),
        run_property("correlation", "P_F(Pi(rho)) <= P_F(rho)", "guaranteed", 1e-10,
                     _post_measurement_purity, trials, seed),
        run_property("correlation", "Delta identity when Pi(rho)=I/d", "guaranteed", 1e-10,
                     _delta_identity, trials, seed),
        run_property("correlation", "F(rho,I/d) <= F(rho,Pi(rho))", "probe", 1e-10,
                     _fmin_inequality, probe_trials, seed),
        run_property("correlation", "C_m >= N_F", "probe", 1e-8, _cm_bounds_fmin, trials, seed),
        run_property("correlation", "Q3 local-channel monotonicity", "probe", 1e-6, _q3, probe_trials, seed),
    ]


# --------------------------------------------------------------------------- #
# Weak measurement                                                            #
# --------------------------------------------------------------------------- #

STRENGTHS = tuple(0.25 * i for i in range(21))


def _weak_setup(rng):
    da = int(rng.choice((2, 3)))
    db = int(rng.choice((1, 2)))
    rho = _bipartite(rng, da, db)
    k = int(rng.integers(1, da))
    basis = random_unitary(da, rng)
    return rho, k, basis


def _interpolation(rng):
    rho, k, basis = _weak_setup(rng)
    worst = 0.0
    for x in STRENGTHS:
        w = weak_measurement(x, rho.dims[0], k, basis)
        diff = np.asarray(weak_apply(rho, w)) - weak_interpolation(rho, w)
        worst = max(worst, float(np.max(np.abs(diff))))
    return worst


def _weak_operators(rng):
    rho, k, basis = _weak_setup(rng)
    x = float(rng.uniform(-5, 5))
    w = weak_measurement(x, rho.dims[0], k, basis)
    a, b = w.operators()
    return max(abs(w.t1**2 + w.t2**2 - 1),
               float(np.max(np.abs(dag(a) @ a + dag(b) @ b - np.eye(w.dim)))),
               abs(2 * w.t1 * w.t2 - w.t))


def _zeta_form(rng):
    rho, k, basis = _weak_setup(rng)
    w = weak_measurement(float(rng.uniform(0, 5)), rho.dims[0], k, basis)
    return abs(weak_fidelity_zeta(rho, w) - weak_fidelity(rho, w))


def _fidelity_at_zero(rng):
    rho, k, basis = _weak_setup(rng)
    return abs(weak_fidelity(rho, weak_measurement(0.0, rho.dims[0], k, basis)) - 1.0)


def _fidelity_at_large(rng):
    rho, k, basis = _weak_setup(rng)
    w = weak_measurement(LARGE_STRENGTH, rho.dims[0], k, basis)
    return abs(weak_fidelity(rho, w) - weak_fidelity_limit(rho, w))


def _fidelity_bounds(rng):
    rho, k, basis = _weak_setup(rng)
    w = weak_measurement(float(rng.uniform(0, 6)), rho.dims[0], k, basis)
    f = weak_fidelity(rho, w)
    return max(0.0, weak_fidelity_limit(rho, w) - f, f - 1)


def _purity_limits(rng):
    rho, k, basis = _weak_setup(rng)
    w0 = weak_measurement(0.0, rho.dims[0], k, basis)
    w_inf = weak_measurement(LARGE_STRENGTH, rho.dims[0], k, basis)
    at0, at_inf = weak_purity_limits(rho, w_inf)
    return max(abs(weak_purity(rho, w0) - at0), abs(weak_purity(rho, w_inf) - at_inf))


def _purity_of_image(rng):
    rho, k, basis = _weak_setup(rng)
    w = weak_measurement(float(rng.uniform(0, 5)), rho.dims[0], k, basis)
    return abs(weak_purity(rho, w) - fidelity_purity(weak_apply(rho, w)))


def _purity_monotone(rng):
    rho, k, basis = _weak_setup(rng)
    values = [weak_purity(rho, weak_measurement(x, rho.dims[0], k, basis)) for x in np.arange(0, 5.01, 0.5)]
    return max(0.0, max(b - a for a, b in zip(values, values[1:])))


def _strong_identity(rng):
    rho, k, basis = _weak_setup(rng)
    w = weak_measurement(1.0, rho.dims[0], k, basis)
    m = np.asarray(rho)
    pi = strong_limit(rho, w)
    return abs(np.vdot(pi, pi).real - np.vdot(m, pi).real)


def weak_suite(trials, seed):
    return [
        run_property("weak", "Omega = t rho + (1-t) Pi(rho)", "guaranteed", 1e-10, _interpolation, trials, seed),
        run_property("weak", "t1^2+t2^2=1, completeness", "guaranteed", 1e-10, _weak_operators, trials, seed),
        run_property("weak", "zeta form = direct fidelity", "guaranteed", 1e-10, _zeta_form, trials, seed),
        run_property("weak", "F(x=0) = 1 exactly", "guaranteed", 0.0, _fidelity_at_zero, trials, seed),
        run_property("weak", "F(x=40) = tr[rho Pi]/tr rho^2", "guaranteed", 1e-8, _fidelity_at_large, trials, seed),
        run_property("weak", "limit <= F <= 1", "guaranteed", 1e-10, _fidelity_bounds, trials, seed),
        run_property("weak", "purity limits x=0, x=40", "guaranteed", 1e-8, _purity_limits, trials, seed),
        run_property("weak", "purity formula = P_F(Omega)", "guaranteed", 1e-10, _purity_of_image, trials, seed),
        run_property("weak", "purity non-increasing in x", "guaranteed", 1e-12, _purity_monotone, trials, seed),
        run_property("weak", "tr Pi(rho)^2 = tr rho Pi(rho)", "guaranteed", 1e-12, _strong_identity, trials, seed),
    ]


SUITE_RUNNERS = {
    "fidelity": fidelity_suite,
    "purity": purity_suite,
    "coherence": coherence_suite,
    "correlation": correlation_suite,
    "weak": weak_suite,
}


def run_harness(suite: str = "all", trials: int = 500, seed: int = 0) -> HarnessReport:
    if trials < 1:
        raise ValueError(f"--trials must be at least 1, got {trials}")
    names = SUITES if suite == "all" else (suite,)
    results = []
    for name in names:
        if name not in SUITE_RUNNERS:
            raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all")
        results.extend(SUITE_RUNNERS[name](trials, seed))
    return HarnessReport(seed, trials, results)
