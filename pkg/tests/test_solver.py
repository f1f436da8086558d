import itertools
import math

import numpy as np
import pytest

import diocheck.solver as solver_mod
from diocheck import (
    Constraint,
    ParameterRangeError,
    ResourceBudgetError,
    SearchConfig,
    big_omega,
    is_z_rough,
    predict_binary_main,
    predict_quaternary_main,
    primes_in,
    scan_exceptional,
    search_binary,
    search_quaternary,
)

BIN_TARGETS = (400.0, 450.0, 500.0, 550.0, 600.0)
QUAD_TARGETS = (430.0, 450.0, 470.5, 500.0, 520.0)
CONSTRAINTS = (Constraint.none(), Constraint.z_rough(5.0), Constraint.omega_le(2))


def _cfg(**kw):
    args = dict(c=1.1, Delta=2.0, X=200.0, mu=0.5)
    args.update(kw)
    return SearchConfig(**args)


def _brute_primes(cfg, table):
    ps = [int(p) for p in primes_in(table, cfg.mu * cfg.X, cfg.X)]
    if cfg.constraint.kind == "z_rough":
        return [p for p in ps if is_z_rough(table, p + 2, cfg.constraint.value)]
    if cfg.constraint.kind == "omega_le":
        return [p for p in ps if big_omega(table, p + 2) <= cfg.constraint.value]
    return ps


def _brute_binary(R, cfg, table):
    ps = _brute_primes(cfg, table)
    count, weighted = 0, 0.0
    for p1, p2 in itertools.product(ps, repeat=2):
        if abs(p1**cfg.c + p2**cfg.c - R) < cfg.Delta:
            count += 1
            weighted += math.log(p1) * math.log(p2)
    if cfg.weighting == "unit":
        weighted = float(count)
    return count, weighted


def _brute_quaternary(N, cfg, table):
    ps = _brute_primes(cfg, table)
    pc = {p: p**cfg.c for p in ps}
    count, weighted = 0, 0.0
    for tup in itertools.product(ps, repeat=4):
        if abs(sum(pc[p] for p in tup) - N) < cfg.Delta:
            count += 1
            weighted += math.prod(math.log(p) for p in tup)
    if cfg.weighting == "unit":
        weighted = float(count)
    return count, weighted


# ---------------------------------------------------------------------------
# config and constraint parsing

def test_constraint_parse():
    assert Constraint.parse("none") == Constraint.none()
    assert Constraint.parse("zrough:5.5") == Constraint.z_rough(5.5)
    assert Constraint.parse("z_rough:7") == Constraint.z_rough(7.0)
    assert Constraint.parse("omega:3") == Constraint.omega_le(3)
    assert Constraint.parse("omega_le:29") == Constraint.omega_le(29)
    for bad in ("rough", "omega", "zrough", "prime:3", ""):
        with pytest.raises(ParameterRangeError):
            Constraint.parse(bad)


def test_search_config_validation():
    with pytest.raises(ParameterRangeError):
        _cfg(Delta=0.0)
    with pytest.raises(ParameterRangeError):
        _cfg(mu=1.0)
    with pytest.raises(ParameterRangeError):
        _cfg(weighting="sqrt")


def test_target_validation(table_1k):
    with pytest.raises(ParameterRangeError):
        search_binary(-5.0, _cfg(), table_1k)
    with pytest.raises(ParameterRangeError):
        search_quaternary(0.0, _cfg(), table_1k)


# ---------------------------------------------------------------------------
# oracle matrix against brute force

@pytest.mark.parametrize("weighting", ["unit", "log"])
@pytest.mark.parametrize("constraint", CONSTRAINTS, ids=lambda c: c.kind)
def test_binary_matches_brute_force(table_1k, weighting, constraint):
    cfg = _cfg(weighting=weighting, constraint=constraint)
    for R in BIN_TARGETS:
        report = search_binary(R, cfg, table_1k)
        count, weighted = _brute_binary(R, cfg, table_1k)
        assert report.count == count, (R, constraint.kind)
        assert report.weighted == pytest.approx(weighted, rel=1e-12, abs=1e-12)


def test_binary_pinned_counts(table_1k):
    by_kind = {}
    for constraint in CONSTRAINTS:
        cfg = _cfg(weighting="unit", constraint=constraint)
        by_kind[constraint.kind] = [
            search_binary(R, cfg, table_1k).count for R in BIN_TARGETS]
    assert by_kind["none"] == [6, 9, 9, 14, 5]
    assert by_kind["z_rough"] == [0, 5, 0, 0, 3]
    assert by_kind["omega_le"] == [6, 7, 2, 6, 5]


@pytest.mark.parametrize("weighting", ["unit", "log"])
@pytest.mark.parametrize("constraint", CONSTRAINTS, ids=lambda c: c.kind)
def test_quaternary_matches_brute_force(table_1k, weighting, constraint):
    cfg = _cfg(X=100.0, Delta=0.5, weighting=weighting, constraint=constraint)
    for N in QUAD_TARGETS:
        report = search_quaternary(N, cfg, table_1k)
        count, weighted = _brute_quaternary(N, cfg, table_1k)
        assert report.count == count, (N, constraint.kind)
        assert report.weighted == pytest.approx(weighted, rel=1e-11, abs=1e-12)


def test_quaternary_pinned_counts(table_1k):
    cfg = _cfg(X=100.0, Delta=0.5, weighting="unit")
    counts = [search_quaternary(N, cfg, table_1k).count for N in QUAD_TARGETS]
    assert counts == [24, 60, 12, 108, 44]


# ---------------------------------------------------------------------------
# exemplars

def test_binary_exemplars_verified(table_1k):
    cfg = _cfg(weighting="unit")
    report = search_binary(550.0, cfg, table_1k)
    assert 0 < len(report.exemplars) <= 10
    for (p1, p2), dist in report.exemplars:
        assert bool(table_1k.is_prime[p1]) and bool(table_1k.is_prime[p2])
        assert 100.0 < p1 <= 200.0 and 100.0 < p2 <= 200.0
        assert dist == pytest.approx(abs(p1**1.1 + p2**1.1 - 550.0), abs=1e-9)
        assert dist < cfg.Delta


def test_quaternary_exemplars_verified(table_1k):
    cfg = _cfg(X=100.0, Delta=0.5, constraint=Constraint.omega_le(2))
    # Target sits on an admissible quadruple sum, so hits are guaranteed.
    N = 2 * 53**1.1 + 59**1.1 + 67**1.1
    report = search_quaternary(N, cfg, table_1k)
    assert len(report.exemplars) > 0
    for tup, dist in report.exemplars:
        assert len(tup) == 4
        for p in tup:
            assert bool(table_1k.is_prime[p])
            assert big_omega(table_1k, p + 2) <= 2
        assert dist == pytest.approx(abs(sum(p**1.1 for p in tup) - N),
                                     abs=1e-9)
        assert dist < 0.5


def test_exemplars_complete_when_few(table_1k):
    cfg = _cfg(weighting="unit")
    report = search_binary(600.0, cfg, table_1k)
    assert report.count == 5
    assert len(report.exemplars) == 5


# ---------------------------------------------------------------------------
# predictions

def test_predict_binary_monte_carlo(rng):
    cfg = _cfg(X=200.0, Delta=2.0)
    R = 500.0
    analytic = predict_binary_main(R, cfg)
    n = 400_000
    t1 = rng.uniform(100.0, 200.0, n)
    t2 = rng.uniform(100.0, 200.0, n)
    inside = np.abs(t1**1.1 + t2**1.1 - R) < 2.0
    area = 100.0 * 100.0
    estimate = area * np.mean(inside)
    sigma = area * np.std(inside) / math.sqrt(n)
    assert abs(analytic - estimate) < 5.0 * sigma


def test_predict_unit_vs_log_scale(rng):
    cfg_log = _cfg(X=200.0, Delta=2.0, weighting="log")
    cfg_unit = _cfg(X=200.0, Delta=2.0, weighting="unit")
    R = 500.0
    log_pred = predict_binary_main(R, cfg_log)
    unit_pred = predict_binary_main(R, cfg_unit)
    # unit density divides by log t1 log t2; the window sits near t ~ 150
    assert unit_pred == pytest.approx(log_pred / math.log(150.0) ** 2, rel=0.05)


def test_predict_binary_empty_window():
    cfg = _cfg()
    assert predict_binary_main(1e9, cfg) == 0.0
    assert predict_binary_main(1.0, cfg) == 0.0


def test_predict_binary_huge_window_exact():
    cfg = _cfg(X=200.0, Delta=4.0 * 200.0**1.1)
    assert predict_binary_main(200.0**1.1, cfg) == pytest.approx(100.0**2)


def test_predict_unit_needs_scale():
    cfg = _cfg(mu=0.0, weighting="unit")
    with pytest.raises(ParameterRangeError):
        predict_binary_main(500.0, cfg)
    with pytest.raises(ParameterRangeError):
        predict_quaternary_main(1000.0, cfg)


def test_predict_quaternary_monte_carlo(rng):
    cfg = _cfg(X=100.0, Delta=0.5)
    N = 470.0
    analytic = predict_quaternary_main(N, cfg)
    n = 400_000
    ts = rng.uniform(50.0, 100.0, (n, 4))
    inside = np.abs((ts**1.1).sum(axis=1) - N) < 0.5
    vol = 50.0**4
    estimate = vol * np.mean(inside)
    sigma = vol * np.std(inside) / math.sqrt(n)
    assert abs(analytic - estimate) < 5.0 * sigma


def test_predict_quaternary_refinement_paths():
    cfg = _cfg(X=1000.0, Delta=0.01)
    with pytest.warns(UserWarning, match="refining"):
        value = predict_quaternary_main(4000.0, cfg)
    assert value > 0.0
    cfg_tiny = _cfg(X=1000.0, Delta=1e-5)
    with pytest.warns(UserWarning, match="refining"):
        with pytest.raises(ParameterRangeError, match="too small"):
            predict_quaternary_main(4000.0, cfg_tiny)


def test_search_reports_ratio(table_1k):
    cfg = _cfg()
    report = search_binary(500.0, cfg, table_1k)
    assert report.prediction > 0.0
    assert report.ratio == pytest.approx(report.weighted / report.prediction)
    assert report.elapsed >= 0.0


def test_no_admissible_primes_warns(table_1k):
    # (199.8, 200] holds no prime at all
    cfg = _cfg(mu=0.999)
    with pytest.warns(UserWarning, match="no admissible primes"):
        report = search_binary(500.0, cfg, table_1k)
    assert report.count == 0
    assert report.weighted == 0.0
    assert report.exemplars == ()


def test_pair_cap_budget(table_1k, monkeypatch):
    monkeypatch.setattr(solver_mod, "PAIR_ENTRY_CAP", 100)
    with pytest.raises(ResourceBudgetError, match="pair sums"):
        search_quaternary(450.0, _cfg(), table_1k)


# ---------------------------------------------------------------------------
# exceptional-set scan

def test_scan_deterministic(table_1k):
    cfg = _cfg()
    a = scan_exceptional(400.0, 20, cfg, table_1k, seed=11)
    b = scan_exceptional(400.0, 20, cfg, table_1k, seed=11)
    assert a.rows == b.rows
    assert a.histogram == b.histogram
    assert a.fraction_zero == b.fraction_zero


def test_scan_threads_agree(table_1k):
    cfg = _cfg()
    serial = scan_exceptional(400.0, 16, cfg, table_1k, seed=5, threads=1)
    parallel = scan_exceptional(400.0, 16, cfg, table_1k, seed=5, threads=4)
    assert serial.rows == parallel.rows


def test_scan_seed_matters(table_1k):
    cfg = _cfg()
    a = scan_exceptional(400.0, 8, cfg, table_1k, seed=1)
    b = scan_exceptional(400.0, 8, cfg, table_1k, seed=2)
    assert [r.R for r in a.rows] != [r.R for r in b.rows]


def test_scan_report_consistency(table_1k):
    cfg = _cfg()
    report = scan_exceptional(400.0, 30, cfg, table_1k, seed=3)
    assert report.samples == 30
    assert len(report.rows) == 30
    assert sum(report.histogram.values()) == 30
    zeros = report.histogram.get(0, 0)
    assert report.fraction_zero == pytest.approx(zeros / 30.0)
    for row in report.rows:
        assert 400.0 < row.R <= 800.0
    finite = [r.ratio for r in report.rows if math.isfinite(r.ratio)]
    if finite:
        assert report.ratio_min <= report.ratio_median <= report.ratio_max


def test_scan_validation(table_1k):
    with pytest.raises(ParameterRangeError):
        scan_exceptional(400.0, 0, _cfg(), table_1k, seed=1)
