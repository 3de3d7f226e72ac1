"""Exact offline optimum for small instances, by exhaustive search."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import InvalidInputError, SizeLimitError
from .model import TOL
from .workload import RequestStream

MAX_REQUESTS = 24


@dataclass
class OfflineInstance:
    requests: RequestStream
    capacities: np.ndarray
    horizon: int

    def __post_init__(self):
        self.capacities = np.ascontiguousarray(self.capacities, dtype=np.float64)
        if len(self.capacities) != self.requests.m:
            raise InvalidInputError("capacities and demands disagree on m")
        if len(self.requests) and int(self.requests.timestamps.max()) > self.horizon:
            raise InvalidInputError(f"a request arrives after the horizon {self.horizon}")


def offline_optimal(instance: OfflineInstance) -> tuple[np.ndarray, float]:
    """Revenue-maximizing accept vector subject to per-slot capacity.

    A request occupies slots ``timestamp .. timestamp + lifetime - 1``, the
    same convention as the online engine.
    """
    s = instance.requests
    if len(s) > MAX_REQUESTS:
        raise SizeLimitError(f"{len(s)} requests exceeds the exhaustive-search limit of {MAX_REQUESTS}")
    x, best = kernels.offline_search(
        s.timestamps, s.lifetimes, s.demands, s.revenues, instance.capacities, int(instance.horizon), TOL
    )
    return x.astype(bool), float(best)


def feasibility_check(decisions, instance: OfflineInstance) -> bool:
    x = np.asarray(decisions, dtype=bool)
    s = instance.requests
    if x.shape != (len(s),):
        raise InvalidInputError(f"decision vector has length {x.size}, expected {len(s)}")
    if not x.any():
        return True
    end = int((s.timestamps + s.lifetimes).max())
    slots = np.arange(1, end)
    # occupancy[t, h] is True when request h holds resources in slot t
    occupancy = (s.timestamps[None, :] <= slots[:, None]) & (slots[:, None] < (s.timestamps + s.lifetimes)[None, :])
    load = (occupancy & x[None, :]).astype(np.float64) @ s.demands
    return bool(np.all(load <= instance.capacities + TOL))
