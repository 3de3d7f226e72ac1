import numpy as np
import pytest

from osac.workload import RequestStream

_criteria = []


@pytest.fixture(scope="session")
def criterion():
    """Record one pass/fail line per acceptance criterion."""

    def record(number, passed, detail):
        _criteria.append((number, bool(passed), detail))
        print(f"CRITERION {number}: {'PASS' if passed else 'FAIL'} - {detail}")
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number, passed, detail in sorted(_criteria, key=lambda c: c[0]):
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}")


def make_stream(timestamps, lifetimes, demands, unit_values=None, weights=None):
    """Build a stream by hand; revenue follows the formula."""
    demands = np.atleast_2d(np.asarray(demands, dtype=float))
    n, m = demands.shape
    lifetimes = np.asarray(lifetimes, dtype=np.int64)
    unit_values = np.ones(n) if unit_values is None else np.asarray(unit_values, dtype=float)
    weights = np.full((n, m), 1.0 / m) if weights is None else np.asarray(weights, dtype=float)
    revenues = lifetimes * unit_values * np.einsum("ij,ij->i", weights, demands)
    return RequestStream(ids=np.arange(1, n + 1), timestamps=timestamps, lifetimes=lifetimes,
                         demands=demands, unit_values=unit_values, weights=weights, revenues=revenues)


def random_stream(rng, n_max=12, t_max=6, m=3, zeta=4, sigma=10.0):
    n = int(rng.integers(0, n_max + 1))
    horizon = int(rng.integers(1, t_max + 1))
    ts = np.sort(rng.integers(1, horizon + 1, n))
    s = make_stream(ts, rng.integers(1, zeta + 1, n), rng.random((n, m)).reshape(n, m),
                    unit_values=1 + (sigma - 1) * rng.random(n))
    s.total_slots = horizon
    return s
