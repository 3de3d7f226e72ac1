"""Synthetic slice-request streams.

Every scenario has a single root seed. It is split into independent
substreams, one per random quantity, so that e.g. changing the inequality
parameter does not move the arrival times or demands. All policies are then
evaluated against the very same stream.
"""
from __future__ import annotations

import csv
import hashlib
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import InvalidInputError, TraceParseError
from .model import SliceRequest, resource_vector

ALPHA_MODES = ("uniform-equal", "simplex-random")
_SUBSTREAMS = ("arrivals", "demands", "lifetimes", "unit_values", "weights")


@dataclass
class ScenarioConfig:
    lam: float = 2.0
    omega: float = 1.0
    sigma: float = 10.0
    zeta: int = 10
    m: int = 3
    capacities: tuple[float, ...] | None = None
    total_slots: int = 100_000
    seed: int = 0
    alpha_mode: str = "uniform-equal"

    def __post_init__(self):
        if self.capacities is None:
            self.capacities = (1.0,) * self.m
        self.capacities = tuple(float(c) for c in self.capacities)
        if len(self.capacities) != self.m:
            raise InvalidInputError(f"capacities has {len(self.capacities)} entries, m={self.m}")
        if any(c <= 0 for c in self.capacities):
            raise InvalidInputError(f"capacities must be positive: {self.capacities}")
        if not self.lam > 0:
            raise InvalidInputError(f"lambda must be > 0, got {self.lam}")
        if not self.omega > 0:
            raise InvalidInputError(f"omega must be > 0, got {self.omega}")
        if not self.sigma >= 1:
            raise InvalidInputError(f"sigma must be >= 1, got {self.sigma}")
        if int(self.zeta) != self.zeta or self.zeta < 1:
            raise InvalidInputError(f"zeta must be a positive integer, got {self.zeta}")
        self.zeta = int(self.zeta)
        if int(self.total_slots) != self.total_slots or self.total_slots < 1:
            raise InvalidInputError(f"total_slots must be >= 1, got {self.total_slots}")
        self.total_slots = int(self.total_slots)
        if self.alpha_mode not in ALPHA_MODES:
            raise InvalidInputError(f"alpha_mode must be one of {ALPHA_MODES}, got {self.alpha_mode!r}")

    @property
    def theta(self) -> float:
        # max(lifetime * unit value) / min(lifetime * unit value) = (zeta * sigma) / 1
        return float(self.sigma * self.zeta)

    def substreams(self) -> dict[str, np.random.Generator]:
        children = np.random.SeedSequence(self.seed).spawn(len(_SUBSTREAMS))
        return {name: np.random.default_rng(ss) for name, ss in zip(_SUBSTREAMS, children)}


def sample_arrival_count(lam: float, rng: np.random.Generator) -> int:
    if not lam > 0:
        raise InvalidInputError(f"lambda must be > 0, got {lam}")
    return int(rng.poisson(lam))


def sample_symmetric_beta(omega: float, rng: np.random.Generator, size=None):
    if not omega > 0:
        raise InvalidInputError(f"omega must be > 0, got {omega}")
    return rng.beta(omega, omega, size)


def unit_value(sigma: float, y):
    return 1.0 + (sigma - 1.0) * y


def sample_request(config: ScenarioConfig, slot: int, id: int, rng: np.random.Generator) -> SliceRequest:
    m = config.m
    demand = rng.random(m)
    lifetime = int(rng.integers(1, config.zeta + 1))
    p = float(unit_value(config.sigma, sample_symmetric_beta(config.omega, rng)))
    if config.alpha_mode == "uniform-equal":
        weights = np.full(m, 1.0 / m)
    else:
        weights = rng.dirichlet(np.ones(m))
    return SliceRequest(id, demand, lifetime, slot, p, weights)


@dataclass
class RequestStream:
    """Column-oriented request sequence, ordered by id (and hence by slot)."""

    ids: np.ndarray
    timestamps: np.ndarray
    lifetimes: np.ndarray
    demands: np.ndarray
    unit_values: np.ndarray
    weights: np.ndarray
    revenues: np.ndarray
    total_slots: int = field(default=0)
    _digest: str | None = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        self.ids = np.ascontiguousarray(self.ids, dtype=np.int64)
        self.timestamps = np.ascontiguousarray(self.timestamps, dtype=np.int64)
        self.lifetimes = np.ascontiguousarray(self.lifetimes, dtype=np.int64)
        self.demands = np.ascontiguousarray(self.demands, dtype=np.float64)
        self.unit_values = np.ascontiguousarray(self.unit_values, dtype=np.float64)
        self.weights = np.ascontiguousarray(self.weights, dtype=np.float64)
        self.revenues = np.ascontiguousarray(self.revenues, dtype=np.float64)
        n = len(self.ids)
        if self.demands.ndim != 2 or self.weights.shape != self.demands.shape:
            raise InvalidInputError("demands and weights must be (n, m) arrays of equal shape")
        for name in ("timestamps", "lifetimes", "unit_values", "revenues"):
            if len(getattr(self, name)) != n:
                raise InvalidInputError(f"{name} has length {len(getattr(self, name))}, expected {n}")
        if n and np.any(np.diff(self.timestamps) < 0):
            raise InvalidInputError("timestamps must be non-decreasing")
        if n and self.timestamps[0] < 1:
            raise InvalidInputError("slots are numbered from 1")
        if n and np.any(self.lifetimes < 1):
            raise InvalidInputError("lifetimes must be >= 1")
        last = int(self.timestamps[-1]) if n else 0
        self.total_slots = max(int(self.total_slots), last)

    def __len__(self):
        return len(self.ids)

    @property
    def m(self) -> int:
        return self.demands.shape[1]

    def request(self, i: int) -> SliceRequest:
        return SliceRequest(
            int(self.ids[i]), self.demands[i], int(self.lifetimes[i]), int(self.timestamps[i]),
            float(self.unit_values[i]), self.weights[i], float(self.revenues[i]),
        )

    def __iter__(self):
        return (self.request(i) for i in range(len(self)))

    @classmethod
    def from_requests(cls, requests, m: int | None = None, total_slots: int = 0) -> "RequestStream":
        requests = list(requests)
        if m is None:
            if not requests:
                raise InvalidInputError("cannot infer m from an empty request list")
            m = requests[0].demand.shape[0]
        return cls(
            ids=np.array([r.id for r in requests], dtype=np.int64),
            timestamps=np.array([r.timestamp for r in requests], dtype=np.int64),
            lifetimes=np.array([r.lifetime for r in requests], dtype=np.int64),
            demands=np.array([r.demand for r in requests], dtype=np.float64).reshape(-1, m),
            unit_values=np.array([r.unit_value for r in requests], dtype=np.float64),
            weights=np.array([r.weights for r in requests], dtype=np.float64).reshape(-1, m),
            revenues=np.array([r.revenue for r in requests], dtype=np.float64),
            total_slots=total_slots,
        )

    def digest(self) -> str:
        """SHA-256 over every column, used to prove that policies saw the same stream.

        Cached: streams are treated as immutable once built.
        """
        if self._digest is not None:
            return self._digest
        h = hashlib.sha256()
        for arr in (self.ids, self.timestamps, self.lifetimes, self.demands,
                    self.unit_values, self.weights, self.revenues):
            h.update(np.ascontiguousarray(arr).tobytes())
        h.update(str(self.total_slots).encode())
        self._digest = h.hexdigest()
        return self._digest


def generate_stream(config: ScenarioConfig) -> RequestStream:
    """Draw the full request stream of a scenario (vectorized)."""
    rngs = config.substreams()
    counts = rngs["arrivals"].poisson(config.lam, config.total_slots)
    n = int(counts.sum())
    m = config.m
    timestamps = np.repeat(np.arange(1, config.total_slots + 1, dtype=np.int64), counts)
    demands = rngs["demands"].random((n, m))
    lifetimes = rngs["lifetimes"].integers(1, config.zeta + 1, n)
    unit_values = unit_value(config.sigma, sample_symmetric_beta(config.omega, rngs["unit_values"], n))
    if config.alpha_mode == "uniform-equal":
        weights = np.full((n, m), 1.0 / m)
    else:
        weights = rngs["weights"].dirichlet(np.ones(m), n)
    revenues = lifetimes * unit_values * np.einsum("ij,ij->i", weights, demands)
    return RequestStream(
        ids=np.arange(1, n + 1), timestamps=timestamps, lifetimes=lifetimes, demands=demands,
        unit_values=unit_values, weights=weights, revenues=revenues, total_slots=config.total_slots,
    )


def stream_columns(m: int) -> list[str]:
    return (["id", "timestamp", "lifetime"] + [f"demand_{j + 1}" for j in range(m)]
            + ["unit_value"] + [f"weight_{j + 1}" for j in range(m)] + ["revenue"])


def write_stream_csv(stream: RequestStream, path) -> None:
    m = stream.m
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(stream_columns(m))
        for i in range(len(stream)):
            w.writerow(
                [int(stream.ids[i]), int(stream.timestamps[i]), int(stream.lifetimes[i])]
                + [repr(float(x)) for x in stream.demands[i]]
                + [repr(float(stream.unit_values[i]))]
                + [repr(float(x)) for x in stream.weights[i]]
                + [repr(float(stream.revenues[i]))]
            )


def read_stream_csv(path, total_slots: int = 0) -> RequestStream:
    """Load a request trace; malformed rows raise :class:`TraceParseError` with the row number."""
    with open(Path(path), newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise TraceParseError(1, "missing header") from None
        header = [h.strip() for h in header]
        m = sum(1 for h in header if h.startswith("demand_"))
        if m == 0 or header != stream_columns(m):
            raise TraceParseError(1, f"unexpected header {header}")
        requests = []
        for rowno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise TraceParseError(rowno, f"expected {len(header)} fields, got {len(row)}")
            try:
                rid, ts, life = int(row[0]), int(row[1]), int(row[2])
                demand = [float(x) for x in row[3:3 + m]]
                p = float(row[3 + m])
                weights = [float(x) for x in row[4 + m:4 + 2 * m]]
                revenue = float(row[4 + 2 * m])
                req = SliceRequest(rid, resource_vector(demand, m), life, ts, p, weights, revenue)
            except (ValueError, InvalidInputError) as exc:
                raise TraceParseError(rowno, str(exc)) from None
            if requests and (req.timestamp < requests[-1].timestamp or req.id <= requests[-1].id):
                raise TraceParseError(rowno, "rows must be ordered by id and timestamp")
            if req.timestamp < 1:
                raise TraceParseError(rowno, "timestamps start at slot 1")
            requests.append(req)
    return RequestStream.from_requests(requests, m=m, total_slots=total_slots)

