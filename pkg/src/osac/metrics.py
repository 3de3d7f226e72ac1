"""Revenue, acceptance and utilization metrics, and gains against FCFS."""
from __future__ import annotations

import math
from dataclasses import dataclass
from statistics import NormalDist

import numpy as np

from .errors import UndefinedMetricError

CI_LEVEL = 0.999


@dataclass(frozen=True)
class RunMetrics:
    total_requests: int
    accepted: int
    average_revenue: float
    acceptance_ratio: float
    average_utilization: float

    @classmethod
    def from_trace(cls, trace) -> "RunMetrics":
        return cls(
            total_requests=len(trace),
            accepted=int(np.count_nonzero(trace.accepted)) if len(trace) else 0,
            average_revenue=average_revenue(trace),
            acceptance_ratio=acceptance_ratio(trace),
            average_utilization=average_utilization(trace, trace.capacities),
        )

    def line(self) -> str:
        return (f"mu={self.average_revenue!r} eta={self.acceptance_ratio!r} "
                f"rho={self.average_utilization!r} n={self.accepted} H={self.total_requests}")


def _require_requests(trace):
    if len(trace) == 0:
        raise UndefinedMetricError("metric undefined for a trace with no requests")


def average_revenue(trace) -> float:
    """Revenue of accepted requests divided by the number of all requests."""
    _require_requests(trace)
    return float(np.sum(trace.revenue[trace.accepted]) / len(trace))


def acceptance_ratio(trace) -> float:
    _require_requests(trace)
    return float(np.count_nonzero(trace.accepted) / len(trace))


def average_utilization(trace, capacities) -> float:
    """Mean over requests of sum_j u_j / C_j, sampled after each decision."""
    _require_requests(trace)
    c = np.asarray(capacities, dtype=np.float64)
    return float(np.sum(trace.utilization / c) / len(trace))


def relative_gain(policy_value: float, baseline_value: float) -> float:
    if baseline_value == 0:
        raise UndefinedMetricError("relative gain against a zero baseline")
    return (policy_value - baseline_value) / baseline_value


def confidence_interval(samples, level: float = CI_LEVEL) -> tuple[float, float]:
    """Mean and normal-approximation half-width ``z * s / sqrt(n)``."""
    x = np.asarray(samples, dtype=np.float64)
    if x.size < 2:
        raise UndefinedMetricError(f"need at least 2 samples for an interval, got {x.size}")
    z = NormalDist().inv_cdf(0.5 + level / 2)
    return float(x.mean()), float(z * x.std(ddof=1) / math.sqrt(x.size))


METRIC_FIELDS = {"rev": "average_revenue", "acr": "acceptance_ratio", "util": "average_utilization"}


@dataclass(frozen=True)
class Gain:
    mean: float
    half_width: float


@dataclass(frozen=True)
class GainReport:
    """Gains of each reservation policy against FCFS for one parameter cell.

    ``gains[policy][metric]`` averages the per-seed relative gains; the
    half-width is NaN when only one seed is available.
    """

    gains: dict

    @classmethod
    def from_runs(cls, runs: dict, baseline: str = "FCFS") -> "GainReport":
        """``runs`` maps a policy label to its per-seed :class:`RunMetrics` list."""
        base = runs[baseline]
        out = {}
        for label, per_seed in runs.items():
            if label == baseline:
                continue
            out[label] = {}
            for key, attr in METRIC_FIELDS.items():
                g = [relative_gain(getattr(p, attr), getattr(b, attr)) for p, b in zip(per_seed, base)]
                if len(g) >= 2:
                    out[label][key] = Gain(*confidence_interval(g))
                else:
                    out[label][key] = Gain(float(g[0]), float("nan"))
        return cls(out)
