import numpy as np
import pytest

from qres.harness import (
    PROBE_MIN_TRIALS,
    HarnessReport,
    PropertyResult,
    _f4,
    check_f_properties,
    run_harness,
    run_property,
    trial_seed,
)


def test_trial_seeds_distinct_across_bases():
    assert trial_seed(0, 999_999) < trial_seed(1, 0)


def test_run_property_records_violations():
    res = run_property("s", "p", "probe", 0.5, lambda rng: rng.random(), 50, seed=2)
    draws = [np.random.default_rng(trial_seed(2, i)).random() for i in range(50)]
    assert res.trials == 50
    assert [s for s, _ in res.violations] == [trial_seed(2, i) for i, v in enumerate(draws) if v > 0.5]
    assert res.max_deviation == max(draws)


def test_nan_counts_as_violation():
    res = run_property("s", "p", "guaranteed", 1.0, lambda rng: float("nan"), 3, seed=0)
    assert res.n_violations == 3


def test_exit_code_ignores_probes():
    ok = PropertyResult("s", "a", "guaranteed", 0.0, trials=1)
    bad_probe = PropertyResult("s", "b", "probe", 0.0, trials=1, violations=[(1, 1.0)])
    assert HarnessReport(0, 1, [ok, bad_probe]).exit_code == 0
    bad = PropertyResult("s", "c", "guaranteed", 0.0, trials=1, violations=[(5, 1.0)])
    assert HarnessReport(0, 1, [ok, bad]).exit_code == 1


def test_report_lists_seeds():
    bad = PropertyResult("s", "c", "probe", 0.0, trials=1, violations=[(123, 0.5)])
    text = HarnessReport(0, 1, [bad]).format()
    assert "s/c: 123 (5.000e-01)" in text and "violated" in text


def test_fidelity_report_reproducible():
    a = check_f_properties(seed=4, trials=40)
    b = check_f_properties(seed=4, trials=40)
    assert a.format() == b.format()


def test_violations_reproduce_from_seed():
    report = check_f_properties(seed=1, trials=60)
    f4 = report.result("F4 pure form <psi|rho|psi>/tr rho^2")
    assert f4.n_violations > 0
    s, dev = f4.violations[0]
    assert _f4(np.random.default_rng(s)) == dev


@pytest.mark.parametrize("suite", ["purity", "weak"])
def test_guaranteed_suites_pass(suite):
    report = run_harness(suite, trials=30, seed=5)
    assert report.guaranteed_ok, report.format()


def test_probes_use_minimum_trials():
    report = run_harness("coherence", trials=5, seed=0)
    assert report.result("C2 incoherent-channel monotonicity").trials >= PROBE_MIN_TRIALS
    assert report.result("C3 strong monotonicity").trials >= PROBE_MIN_TRIALS


def test_bad_arguments():
    with pytest.raises(ValueError):
        run_harness("entropy", trials=1)
    with pytest.raises(ValueError):
        run_harness("fidelity", trials=0)
