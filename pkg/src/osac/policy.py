"""Reservation-based admission policies and the greedy baseline.

Both reservation policies turn the current utilization of each resource into
an integer scarcity level ``q_j`` and price a request's demand against it.
The request is admitted when its revenue covers that price and it fits.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .model import AdmissionDecision, SliceRequest, SystemState


class PolicyKind(enum.IntEnum):
    FCFS = 0
    LINRP = 1
    EXPRP = 2

    @classmethod
    def parse(cls, name) -> "PolicyKind":
        if isinstance(name, cls):
            return name
        try:
            return cls[str(name).strip().upper()]
        except KeyError:
            raise InvalidInputError(f"unknown policy {name!r}; expected one of fcfs, linrp, exprp") from None

    @property
    def label(self) -> str:
        return {0: "FCFS", 1: "LinRP", 2: "ExpRP"}[int(self)]


LOG_BASES = ("natural", "two")


def heterogeneity_ratio(capacities) -> np.ndarray:
    c = np.asarray(capacities, dtype=np.float64).reshape(-1)
    if c.size == 0 or np.any(c <= 0):
        raise InvalidInputError(f"capacities must be positive: {c}")
    return c.sum() / c


def _log(x: float, base: str) -> float:
    if base == "natural":
        return math.log(x)
    if base == "two":
        return math.log2(x)
    raise InvalidInputError(f"log base must be one of {LOG_BASES}, got {base!r}")


@dataclass(frozen=True)
class PolicyParams:
    kind: PolicyKind
    theta: float
    kappa: tuple[float, ...]
    log_base: str = "natural"

    def __post_init__(self):
        object.__setattr__(self, "kind", PolicyKind.parse(self.kind))
        object.__setattr__(self, "kappa", tuple(float(k) for k in self.kappa))
        if not self.theta > 1:
            raise InvalidInputError(f"theta must be > 1, got {self.theta}")
        if not self.kappa or any(k < 1 - 1e-12 for k in self.kappa):
            raise InvalidInputError(f"kappa components must be >= 1: {self.kappa}")
        if self.log_base not in LOG_BASES:
            raise InvalidInputError(f"log base must be one of {LOG_BASES}, got {self.log_base!r}")

    @classmethod
    def for_capacities(cls, kind, theta: float, capacities, log_base: str = "natural") -> "PolicyParams":
        return cls(kind, theta, tuple(heterogeneity_ratio(capacities)), log_base)

    @property
    def m(self) -> int:
        return len(self.kappa)

    # Scale factors shared with the compiled kernels so both paths do identical arithmetic.
    @property
    def lin_scale(self) -> float:
        return math.sqrt(self.theta * self.m)

    @property
    def lin_coef(self) -> np.ndarray:
        return np.array([math.sqrt(2.0 * k / self.m) for k in self.kappa])

    @property
    def exp_scale(self) -> np.ndarray:
        return np.array([_log(self.theta * k, self.log_base) for k in self.kappa])


def _check_dims(*vectors):
    n = len(vectors[0])
    if any(len(v) != n for v in vectors):
        raise InvalidInputError(f"dimension mismatch: {[len(v) for v in vectors]}")


def _check_utilization(utilization, capacities):
    _check_dims(utilization, capacities)
    for u, c in zip(utilization, capacities):
        if c <= 0:
            raise InvalidInputError(f"capacities must be positive: {list(capacities)}")
        if u < 0 or u > c * (1 + 1e-12):
            raise InvalidInputError(f"utilization {u} outside [0, {c}]")


def lin_normalized_utilization(utilization, capacities, theta: float, m: int) -> np.ndarray:
    if theta * m < 1:
        raise InvalidInputError(f"theta * m must be >= 1, got {theta * m}")
    _check_utilization(utilization, capacities)
    scale = math.sqrt(theta * m)
    return np.array([math.floor((u / c) * scale) for u, c in zip(utilization, capacities)], dtype=np.int64)


def exp_normalized_utilization(utilization, capacities, theta: float, kappa, log_base: str = "natural") -> np.ndarray:
    _check_dims(utilization, capacities, kappa)
    if any(theta * k <= 1 for k in kappa):
        raise InvalidInputError(f"theta * kappa_j must exceed 1 (theta={theta}, kappa={list(kappa)})")
    _check_utilization(utilization, capacities)
    return np.array(
        [math.floor((u / c) * _log(theta * k, log_base)) for u, c, k in zip(utilization, capacities, kappa)],
        dtype=np.int64,
    )


def lin_admission_cost(q_prev, demand, kappa, m: int) -> float:
    """Largest per-resource price ``q_j * sqrt(2 kappa_j / m) * r_j``."""
    _check_dims(q_prev, demand, kappa)
    if len(demand) != m:
        raise InvalidInputError(f"expected {m} components, got {len(demand)}")
    cost = 0.0
    for q, r, k in zip(q_prev, demand, kappa):
        cost = max(cost, q * math.sqrt(2.0 * k / m) * r)
    return float(cost)


def exp_admission_cost(q_prev, demand) -> float:
    """Sum of per-resource prices ``(2**q_j - 1) * r_j``."""
    _check_dims(q_prev, demand)
    cost = 0.0
    for q, r in zip(q_prev, demand):
        cost += (2.0 ** int(q) - 1.0) * r
    return float(cost)


def normalized_utilization(params: PolicyParams, utilization, capacities) -> np.ndarray:
    if params.kind is PolicyKind.LINRP:
        return lin_normalized_utilization(utilization, capacities, params.theta, params.m)
    if params.kind is PolicyKind.EXPRP:
        return exp_normalized_utilization(utilization, capacities, params.theta, params.kappa, params.log_base)
    return np.zeros(len(capacities), dtype=np.int64)


def admission_cost(params: PolicyParams, q_prev, demand) -> float:
    if params.kind is PolicyKind.LINRP:
        return lin_admission_cost(q_prev, demand, params.kappa, params.m)
    if params.kind is PolicyKind.EXPRP:
        return exp_admission_cost(q_prev, demand)
    return 0.0


def decide(request: SliceRequest, threshold: float, state: SystemState, kind=None) -> AdmissionDecision:
    """Admit iff revenue >= threshold and the demand fits in every dimension.

    Passing ``kind=PolicyKind.FCFS`` forces the threshold to zero.
    """
    if threshold < 0:
        raise InvalidInputError(f"threshold must be >= 0, got {threshold}")
    if kind is not None and PolicyKind.parse(kind) is PolicyKind.FCFS:
        threshold = 0.0
    ok = request.revenue >= threshold and state.fits(request.demand)
    return AdmissionDecision(request.id, bool(ok), float(threshold))
