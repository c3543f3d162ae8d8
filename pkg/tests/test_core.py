import numpy as np
import pytest

from dcsplit.core import (AlphaSchedule, DCProblem, KappaSchedule, RunTrace, SolverConfig,
                          StopRule, TRACE_HEADER, TraceRow, check_assumption, evaluate_objective)
from dcsplit.errors import ConfigError, NonFinite
from dcsplit.problems import RlsLogSpec, build_rls_log, quad_l1_huber_problem


def _toy(rho=None, L=None, objective=lambda x: float(x @ x)):
    ident = lambda beta, x: x  # noqa: E731
    return DCProblem(2, ident, ident, lambda x: 0 * x, objective, rho, L)


@pytest.mark.parametrize("rho, L, expected", [(1.0, 1.0, "satisfied"), (0.4, 1.0, "violated"),
                                              (None, 1.0, "unknown")])
def test_check_assumption(rho, L, expected):
    assert check_assumption(_toy(rho, L))["strong_convexity"] == expected


def test_check_assumption_reports_kappa():
    cfg = SolverConfig(kappa=KappaSchedule.ratio(10))
    assert check_assumption(_toy(1.0, 1.0), cfg)["kappa"] == "satisfied"


def test_evaluate_objective_rls_origin():
    p = build_rls_log(RlsLogSpec(30, 10, seed=2))
    b = p.parts["b"]
    assert evaluate_objective(p, np.zeros(10)) == pytest.approx(0.5 * b @ b, abs=1e-12)


def test_evaluate_objective_quad_origin():
    p = quad_l1_huber_problem(np.eye(3), np.zeros(3), 0.0)
    assert evaluate_objective(p, np.zeros(3)) == 0.0


def test_evaluate_objective_recomputation(rng):
    A = rng.standard_normal((15, 6))
    b = rng.standard_normal(15)
    mu, eps = 0.01, 0.5
    from dcsplit.problems import rls_log_problem
    p = rls_log_problem(A, b, mu, eps)
    for _ in range(20):
        w = rng.standard_normal(6)
        J = 0.5 * np.sum((A @ w - b) ** 2) + np.sum(mu * np.log(np.abs(w) + eps) - mu * np.log(eps))
        assert evaluate_objective(p, w) == pytest.approx(J, abs=1e-10)


def test_evaluate_objective_nonfinite():
    with pytest.raises(NonFinite):
        evaluate_objective(_toy(objective=lambda x: np.inf), np.zeros(2))


def test_evaluate_objective_dimension():
    with pytest.raises(ValueError):
        evaluate_objective(_toy(), np.zeros(3))


@pytest.mark.parametrize("value", [0.0, 2.0, -0.1, 2.5])
def test_kappa_rejected(value):
    with pytest.raises(ConfigError):
        KappaSchedule.constant(value)


def test_kappa_ratio_values():
    k = KappaSchedule.ratio(10)
    assert k(1) == pytest.approx(1 / 11)
    assert all(0 < k(n) < 2 for n in range(1, 5000))
    assert k.bounds() == (1 / 11, 1.0)


def test_alpha_schedules():
    a = AlphaSchedule.harmonic(1.0)
    assert a(1) == 0.5 and a(9) == 0.1
    assert AlphaSchedule.harmonic(0.1)(1) == pytest.approx(0.05)
    for bad in (1.0, -0.1):
        with pytest.raises(ConfigError):
            AlphaSchedule.constant(bad)


@pytest.mark.parametrize("kw", [dict(beta=0.0), dict(beta=-1.0), dict(theta=-0.5),
                                dict(max_iter=-1)])
def test_config_rejects(kw):
    with pytest.raises(ConfigError):
        SolverConfig(**kw)


def test_config_replace_validates():
    cfg = SolverConfig(beta=0.5)
    assert cfg.replace(theta=2.0).theta == 2.0
    with pytest.raises(ConfigError):
        cfg.replace(beta=0)


def test_stop_rule_formulas(rng):
    x = rng.standard_normal(5)
    for kind in ("squared", "relative", "absolute"):
        assert StopRule(kind, 1e-5).measure(x, x) == 0.0
    new = np.array([10.0, 0.0])
    old = np.array([10.0, 0.5])
    assert StopRule("relative", 1).measure(new, old) == pytest.approx(0.05)
    for _ in range(20):
        a, b = rng.standard_normal(4), rng.standard_normal(4)
        assert StopRule("squared", 1).measure(a, b) == pytest.approx(
            StopRule("absolute", 1).measure(a, b) ** 2, rel=1e-14)


def test_stop_rule_fires_strictly():
    r = StopRule("absolute", 1e-4)
    assert r.fired(0.9e-4) and not r.fired(1e-4)
    with pytest.raises(ConfigError):
        StopRule("absolute", 0.0)
    with pytest.raises(ConfigError):
        StopRule("manhattan", 1.0)


def test_trace_csv_roundtrip(tmp_path):
    rows = [TraceRow(1, 0.5, 0.25, 0.5, 3.0, 0.01, 0.7, 0.0),
            TraceRow(2, 0.1, 0.01, 0.1, None, 0.02, 0.2, 0.1, 1.5, None)]
    tr = RunTrace(rows=rows, converged=True, total_iterations=2)
    path = tmp_path / "t.csv"
    text = tr.to_csv(path)
    assert text.splitlines()[0] == ",".join(TRACE_HEADER)
    back = RunTrace.read_csv(path)
    assert back.rows == rows
    assert tr.summary()["final_err"] == 0.1
    assert '"converged": true' in tr.to_json()
