import numpy as np
import pytest
from conftest import make_stream
from hypothesis import given, settings, strategies as st

from osac.errors import UndefinedMetricError
from osac.metrics import (GainReport, RunMetrics, acceptance_ratio, average_revenue, average_utilization,
                          confidence_interval, relative_gain)
from osac.policy import PolicyKind, PolicyParams
from osac.simulator import DecisionTrace, replay
from osac.workload import ScenarioConfig, generate_stream


def trace(revenue, accepted, utilization=None, caps=(1.0, 1.0, 1.0)):
    n = len(revenue)
    u = np.zeros((n, len(caps))) if utilization is None else np.asarray(utilization, float)
    return DecisionTrace(PolicyKind.FCFS, np.asarray(caps), np.arange(1, n + 1), np.ones(n, int),
                         np.asarray(accepted, bool), np.zeros(n), np.asarray(revenue, float), u,
                         np.zeros((n, len(caps)), int), np.zeros(len(caps)))


def test_average_revenue_examples():
    assert average_revenue(trace([4, 6], [False, False])) == 0
    assert average_revenue(trace([4, 6], [True, True])) == 5
    assert average_revenue(trace([4, 6], [False, True])) == 3


def test_acceptance_ratio_examples():
    assert acceptance_ratio(trace([1] * 4, [True] * 4)) == 1
    assert acceptance_ratio(trace([1] * 4, [False] * 4)) == 0
    assert acceptance_ratio(trace([1] * 10, [True] * 3 + [False] * 7)) == pytest.approx(0.3)


def test_average_utilization_examples():
    assert average_utilization(trace([1], [False]), (1, 1, 1)) == 0
    assert average_utilization(trace([1], [True], [[0.5, 0.5, 0.5]]), (1, 1, 1)) == pytest.approx(1.5)


def test_empty_trace_metrics_undefined():
    t = trace([], [])
    for fn in (average_revenue, acceptance_ratio):
        with pytest.raises(UndefinedMetricError):
            fn(t)
    with pytest.raises(UndefinedMetricError):
        average_utilization(t, (1, 1, 1))


@pytest.mark.parametrize("a, b, expected", [(11, 10, 0.1), (10, 10, 0.0), (8.7, 10, -0.13)])
def test_relative_gain(a, b, expected):
    assert relative_gain(a, b) == pytest.approx(expected, abs=1e-12)


def test_relative_gain_zero_baseline():
    with pytest.raises(UndefinedMetricError):
        relative_gain(1, 0)


def test_confidence_interval():
    assert confidence_interval([3.0] * 5) == (3.0, 0.0)
    assert confidence_interval([0.0, 1.0])[0] == 0.5
    with pytest.raises(UndefinedMetricError):
        confidence_interval([1.0])
    x = np.random.default_rng(0).standard_normal(10_000)
    _, hw = confidence_interval(x)
    assert hw == pytest.approx(3.2905 / 100, rel=0.1)


def test_metrics_against_independent_fold():
    cfg = ScenarioConfig(omega=0.1, total_slots=3000, seed=4)
    s = generate_stream(cfg)
    for kind in PolicyKind:
        t = replay(s, PolicyParams.for_capacities(kind, cfg.theta, cfg.capacities), cfg.capacities)
        total, n, util = 0.0, 0, 0.0
        for h in range(len(t)):
            if t.accepted[h]:
                total += t.revenue[h]
                n += 1
            util += sum(t.utilization[h][j] / cfg.capacities[j] for j in range(3))
        m = RunMetrics.from_trace(t)
        assert m.average_revenue == pytest.approx(total / len(t), rel=1e-12)
        assert m.acceptance_ratio * len(t) == pytest.approx(n, abs=1e-9)
        assert m.average_utilization == pytest.approx(util / len(t), rel=1e-12)
        assert 0 <= m.acceptance_ratio <= 1 and 0 <= m.average_utilization <= 3


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([0.125, 0.5, 2.0, 4.0, 16.0]), st.integers(0, 10_000))
def test_utilization_invariant_to_common_scaling(c, seed):
    # powers of two keep every sum and comparison exact, so decisions cannot flip
    rng = np.random.default_rng(seed)
    n = 40
    ts = np.sort(rng.integers(1, 15, n))
    life = rng.integers(1, 5, n)
    d = rng.random((n, 3))
    p = PolicyParams.for_capacities("fcfs", 100, (1, 1, 1))
    a = replay(make_stream(ts, life, d), p, (1.0, 1.0, 1.0))
    b = replay(make_stream(ts, life, d * c), p, (c, c, c))
    np.testing.assert_array_equal(a.accepted, b.accepted)
    assert average_utilization(b, (c, c, c)) == pytest.approx(average_utilization(a, (1, 1, 1)), rel=1e-12)


def test_gain_report():
    def rm(mu, eta, rho):
        return RunMetrics(10, 5, mu, eta, rho)
    runs = {"FCFS": [rm(10, 0.5, 1.0), rm(10, 0.5, 1.0)], "LinRP": [rm(11, 0.4, 0.9), rm(12, 0.45, 1.0)]}
    g = GainReport.from_runs(runs).gains["LinRP"]
    assert g["rev"].mean == pytest.approx(0.15)
    assert g["acr"].mean == pytest.approx(-0.15)
    assert g["util"].mean == pytest.approx(-0.05)
    assert g["rev"].half_width > 0
    single = GainReport.from_runs({"FCFS": [rm(10, 0.5, 1)], "ExpRP": [rm(11, 0.5, 1)]}).gains["ExpRP"]
    assert np.isnan(single["rev"].half_width)
