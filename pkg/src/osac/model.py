"""Slice requests, the shared resource pool and revenue accounting."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CapacityViolationError, InvalidInputError

TOL = 1e-9


def resource_vector(values, m: int | None = None) -> np.ndarray:
    """Validate and copy ``values`` into a float64 vector of non-negative entries."""
    vec = np.array(values, dtype=np.float64, copy=True).reshape(-1)
    if m is not None and vec.shape[0] != m:
        raise InvalidInputError(f"expected {m} resource components, got {vec.shape[0]}")
    if not np.all(np.isfinite(vec)) or np.any(vec < 0):
        raise InvalidInputError(f"resource components must be finite and >= 0: {vec}")
    return vec


def check_weights(weights, m: int) -> np.ndarray:
    w = np.asarray(weights, dtype=np.float64).reshape(-1)
    if w.shape[0] != m:
        raise InvalidInputError(f"expected {m} weights, got {w.shape[0]}")
    if np.any(w < 0) or abs(float(w.sum()) - 1.0) > TOL:
        raise InvalidInputError(f"weights must lie on the unit simplex: {w}")
    return w


def compute_revenue(lifetime: int, unit_value: float, weights, demand) -> float:
    """Revenue of a request: lifetime * unit value * (weights . demand)."""
    d = resource_vector(demand)
    w = check_weights(weights, d.shape[0])
    if lifetime < 0 or unit_value < 0:
        raise InvalidInputError("lifetime and unit value must be non-negative")
    return float(lifetime * unit_value * float(np.dot(w, d)))


@dataclass
class SliceRequest:
    id: int
    demand: np.ndarray
    lifetime: int
    timestamp: int
    unit_value: float
    weights: np.ndarray
    revenue: float | None = None

    def __post_init__(self):
        self.demand = resource_vector(self.demand)
        self.weights = check_weights(self.weights, self.demand.shape[0])
        if int(self.lifetime) != self.lifetime or self.lifetime < 1:
            raise InvalidInputError(f"lifetime must be an integer >= 1, got {self.lifetime}")
        self.lifetime = int(self.lifetime)
        self.timestamp = int(self.timestamp)
        expected = compute_revenue(self.lifetime, self.unit_value, self.weights, self.demand)
        if self.revenue is None:
            self.revenue = expected
        elif abs(self.revenue - expected) > TOL * max(1.0, abs(expected)):
            raise InvalidInputError(
                f"request {self.id}: revenue {self.revenue} does not match formula value {expected}"
            )

    @property
    def release_slot(self) -> int:
        # occupies slots timestamp .. timestamp + lifetime - 1
        return self.timestamp + self.lifetime


@dataclass
class ActiveSlice:
    id: int
    demand: np.ndarray
    release_slot: int


@dataclass
class AdmissionDecision:
    request_id: int
    accepted: bool
    threshold: float


@dataclass
class SystemState:
    """Pooled capacities plus the slices currently holding resources.

    Mutated in place by :meth:`commit` and :meth:`release_expired`.
    """

    capacities: np.ndarray
    utilization: np.ndarray = None
    active: list[ActiveSlice] = field(default_factory=list)

    def __post_init__(self):
        self.capacities = resource_vector(self.capacities)
        if self.utilization is None:
            self.utilization = np.zeros_like(self.capacities)
        else:
            self.utilization = resource_vector(self.utilization, self.m)

    @property
    def m(self) -> int:
        return self.capacities.shape[0]

    def remaining_capacity(self) -> np.ndarray:
        return np.maximum(self.capacities - self.utilization, 0.0)

    def fits(self, demand) -> bool:
        u, c = self.utilization, self.capacities
        return all(demand[j] <= c[j] - u[j] for j in range(self.m))

    def commit(self, request: SliceRequest) -> None:
        d = request.demand
        if d.shape[0] != self.m:
            raise InvalidInputError(f"request {request.id} has {d.shape[0]} components, pool has {self.m}")
        over = d - (self.capacities - self.utilization)
        if np.any(over > TOL):
            raise CapacityViolationError(
                f"request {request.id} exceeds remaining capacity by {over.max():.3g}"
            )
        for j in range(self.m):
            self.utilization[j] += d[j]
        self.active.append(ActiveSlice(request.id, d, request.release_slot))

    def release_expired(self, current_slot: int) -> list[ActiveSlice]:
        """Drop every slice whose release slot is ``<= current_slot``; return them."""
        due = [a for a in self.active if a.release_slot <= current_slot]
        if not due:
            return due
        self.active = [a for a in self.active if a.release_slot > current_slot]
        for a in due:
            for j in range(self.m):
                self.utilization[j] -= a.demand[j]
        if not self.active:
            self.utilization[:] = 0.0
        else:
            np.maximum(self.utilization, 0.0, out=self.utilization)
        return due
