"""Time-slotted online admission engine."""
from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import InvalidInputError
from .model import SystemState
from .policy import PolicyKind, PolicyParams, admission_cost, decide, heterogeneity_ratio, normalized_utilization
from .workload import RequestStream, ScenarioConfig, generate_stream, read_stream_csv


@dataclass
class DecisionTrace:
    """One record per request, in request order.

    ``utilization[h]`` and ``levels[h]`` are the utilization and normalized
    utilization right after request ``h`` was handled.
    """

    policy: PolicyKind
    capacities: np.ndarray
    ids: np.ndarray
    slots: np.ndarray
    accepted: np.ndarray
    phi: np.ndarray
    revenue: np.ndarray
    utilization: np.ndarray
    levels: np.ndarray
    final_utilization: np.ndarray
    stream_digest: str = ""

    def __len__(self):
        return len(self.ids)

    @property
    def m(self) -> int:
        return len(self.capacities)

    def same_decisions(self, other: "DecisionTrace") -> bool:
        return (
            np.array_equal(self.ids, other.ids)
            and np.array_equal(self.slots, other.slots)
            and np.array_equal(self.accepted, other.accepted)
            and np.array_equal(self.phi, other.phi)
            and np.array_equal(self.utilization, other.utilization)
            and np.array_equal(self.levels, other.levels)
        )


def _check_consistent(params: PolicyParams, capacities: np.ndarray, m: int):
    if params.m != m or len(capacities) != m:
        raise InvalidInputError(f"dimension mismatch: policy m={params.m}, capacities {len(capacities)}, stream m={m}")
    expected = heterogeneity_ratio(capacities)
    if not np.allclose(expected, params.kappa, rtol=1e-12, atol=0):
        raise InvalidInputError(f"kappa {params.kappa} does not match capacities {capacities.tolist()}")


def replay(stream, params: PolicyParams, capacities) -> DecisionTrace:
    """Evaluate ``params`` on a fixed request stream (array or CSV path)."""
    if not isinstance(stream, RequestStream):
        stream = read_stream_csv(stream)
    capacities = np.ascontiguousarray(capacities, dtype=np.float64)
    _check_consistent(params, capacities, stream.m)
    accepted, phi, u_after, q_after, u_final = kernels.simulate(
        stream.timestamps, stream.lifetimes, stream.demands, stream.revenues, capacities,
        int(params.kind), params.lin_scale, params.lin_coef, params.exp_scale,
    )
    return DecisionTrace(
        policy=params.kind, capacities=capacities, ids=stream.ids.copy(), slots=stream.timestamps.copy(),
        accepted=accepted, phi=phi, revenue=stream.revenues.copy(), utilization=u_after, levels=q_after,
        final_utilization=u_final, stream_digest=stream.digest(),
    )


def policy_for(config: ScenarioConfig, kind, log_base: str = "natural") -> PolicyParams:
    return PolicyParams.for_capacities(kind, config.theta, config.capacities, log_base)


def run_scenario(config: ScenarioConfig, params: PolicyParams) -> DecisionTrace:
    if abs(params.theta - config.theta) > 1e-12 * config.theta:
        raise InvalidInputError(f"policy theta {params.theta} != sigma*zeta = {config.theta}")
    return replay(generate_stream(config), params, config.capacities)


def run_reference(stream: RequestStream, params: PolicyParams, capacities) -> DecisionTrace:
    """Slow object-level engine: same semantics as :func:`replay`, written
    against :class:`SystemState` and the policy functions directly."""
    capacities = np.asarray(capacities, dtype=np.float64)
    _check_consistent(params, capacities, stream.m)
    state = SystemState(capacities)
    n, m = len(stream), stream.m
    accepted = np.zeros(n, dtype=bool)
    phi = np.zeros(n)
    u_after = np.zeros((n, m))
    q_after = np.zeros((n, m), dtype=np.int64)
    q = normalized_utilization(params, state.utilization, capacities)
    h = 0
    for slot in range(1, stream.total_slots + 1):
        if state.release_expired(slot):
            q = normalized_utilization(params, state.utilization, capacities)
        while h < n and stream.timestamps[h] == slot:
            req = stream.request(h)
            threshold = admission_cost(params, q, req.demand)
            d = decide(req, threshold, state, params.kind)
            if d.accepted:
                state.commit(req)
            state.release_expired(slot)
            q = normalized_utilization(params, state.utilization, capacities)
            accepted[h], phi[h] = d.accepted, d.threshold
            u_after[h], q_after[h] = state.utilization, q
            h += 1
    slot = stream.total_slots
    while state.active:
        slot += 1
        state.release_expired(slot)
    return DecisionTrace(
        policy=params.kind, capacities=capacities, ids=stream.ids.copy(), slots=stream.timestamps.copy(),
        accepted=accepted, phi=phi, revenue=stream.revenues.copy(), utilization=u_after, levels=q_after,
        final_utilization=state.utilization.copy(), stream_digest=stream.digest(),
    )


def trace_columns(m: int) -> list[str]:
    return (["id", "slot", "policy", "accepted", "phi", "revenue"]
            + [f"u_{j + 1}" for j in range(m)] + [f"q_{j + 1}" for j in range(m)])


def write_trace_csv(trace: DecisionTrace, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(trace_columns(trace.m))
        label = trace.policy.label
        for i in range(len(trace)):
            w.writerow(
                [int(trace.ids[i]), int(trace.slots[i]), label, int(trace.accepted[i]),
                 repr(float(trace.phi[i])), repr(float(trace.revenue[i]))]
                + [repr(float(x)) for x in trace.utilization[i]]
                + [int(x) for x in trace.levels[i]]
            )
