"""Online admission control of network-slice requests.

Reservation-price policies (linear and exponential) and a greedy FCFS
baseline, a time-slotted simulator, metrics, and an exact offline oracle.
"""
from ._jit import NUMBA_ENABLED
from .errors import (CapacityViolationError, ConfigError, InvalidInputError, OSACError, SizeLimitError,
                     TraceParseError, UndefinedMetricError)
from .metrics import GainReport, RunMetrics, confidence_interval, relative_gain
from .model import AdmissionDecision, SliceRequest, SystemState, compute_revenue
from .oracle import OfflineInstance, feasibility_check, offline_optimal
from .policy import PolicyKind, PolicyParams, decide, heterogeneity_ratio
from .simulator import DecisionTrace, policy_for, replay, run_reference, run_scenario
from .sweep import SweepSpec, run_sweep
from .workload import RequestStream, ScenarioConfig, generate_stream

__version__ = "0.1.0"
