"""Parameter sweeps over (zeta, sigma, omega) with common random numbers.

Output layout under ``out_dir``::

    cells.csv                     one row per (cell, seed, policy)
    gains/sigma<S>/rev<Z>.csv     revenue gains vs FCFS, one row per omega
    gains/sigma<S>/acr<Z>.csv     acceptance-ratio gains
    gains/sigma<S>/util<Z>.csv    utilization gains
    summary.json                  sweep settings, stream hashes, gain extrema
    traces/...                    per-policy decision traces (optional)
"""
from __future__ import annotations

import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .errors import ConfigError, InvalidInputError
from .metrics import METRIC_FIELDS, GainReport, RunMetrics
from .policy import LOG_BASES, PolicyKind
from .simulator import policy_for, replay, write_trace_csv
from .workload import ALPHA_MODES, ScenarioConfig, generate_stream

log = logging.getLogger(__name__)

DEFAULT_OMEGAS = tuple(round(0.05 * k, 10) for k in range(1, 21))
DEFAULT_SIGMAS = tuple(float(s) for s in range(10, 101, 10))
DEFAULT_ZETAS = (10, 30, 100)
DEFAULT_SLOTS = 100_000
FULL_SCALE_SLOTS = 50_000_000

CELL_COLUMNS = ["zeta", "sigma", "omega", "seed", "policy", "total_requests", "accepted",
                "average_revenue", "acceptance_ratio", "average_utilization", "stream_sha256"]


def gain_columns(metric: str) -> list[str]:
    return ["unit_value_beta_params", f"linrp_{metric}_gain", f"exprp_{metric}_gain", "y_error_lin", "y_error_exp"]


@dataclass
class SweepSpec:
    omega_values: list = field(default_factory=lambda: list(DEFAULT_OMEGAS))
    sigma_values: list = field(default_factory=lambda: list(DEFAULT_SIGMAS))
    zeta_values: list = field(default_factory=lambda: list(DEFAULT_ZETAS))
    slots_per_run: int = DEFAULT_SLOTS
    seeds: list = field(default_factory=lambda: list(range(10)))
    policies: list = field(default_factory=lambda: ["FCFS", "LinRP", "ExpRP"])
    out_dir: str = "results"
    lam: float = 2.0
    alpha_mode: str = "uniform-equal"
    log_base: str = "natural"
    workers: int = 1
    write_traces: bool = False

    def __post_init__(self):
        for name in ("omega_values", "sigma_values", "zeta_values", "seeds", "policies"):
            if not list(getattr(self, name)):
                raise ConfigError(name, "must not be empty")
        try:
            self.omega_values = [float(x) for x in self.omega_values]
            self.sigma_values = [float(x) for x in self.sigma_values]
            self.zeta_values = [int(x) for x in self.zeta_values]
            self.seeds = [int(x) for x in self.seeds]
        except (TypeError, ValueError) as exc:
            raise ConfigError("values", str(exc)) from None
        try:
            kinds = sorted({PolicyKind.parse(p) for p in self.policies})
        except InvalidInputError as exc:
            raise ConfigError("policies", str(exc)) from None
        self.policies = [k.label for k in kinds]
        if len(set(self.seeds)) != len(self.seeds):
            raise ConfigError("seeds", "seeds must be distinct")
        if self.slots_per_run < 1:
            raise ConfigError("slots_per_run", "must be >= 1")
        if self.alpha_mode not in ALPHA_MODES:
            raise ConfigError("alpha_mode", f"must be one of {ALPHA_MODES}")
        if self.log_base not in LOG_BASES:
            raise ConfigError("log_base", f"must be one of {LOG_BASES}")
        if self.workers < 1:
            raise ConfigError("workers", "must be >= 1")
        for name, values in (("omega_values", self.omega_values), ("sigma_values", self.sigma_values)):
            if any(v <= 0 for v in values):
                raise ConfigError(name, "must be positive")
        if any(s < 1 for s in self.sigma_values):
            raise ConfigError("sigma_values", "must be >= 1")
        if any(z < 1 for z in self.zeta_values):
            raise ConfigError("zeta_values", "must be >= 1")
        if any(s * z <= 1 for s in self.sigma_values for z in self.zeta_values):
            raise ConfigError("sigma_values", "sigma * zeta must exceed 1")

    def cells(self):
        """Grid cells in output order: zeta, then sigma, then omega."""
        return [(z, s, w) for z in self.zeta_values for s in self.sigma_values for w in self.omega_values]

    def scenario(self, zeta, sigma, omega, seed) -> ScenarioConfig:
        return ScenarioConfig(lam=self.lam, omega=omega, sigma=sigma, zeta=zeta,
                              total_slots=self.slots_per_run, seed=seed, alpha_mode=self.alpha_mode)


def _fmt(x: float) -> str:
    return repr(float(x))


def _run_task(spec: SweepSpec, zeta, sigma, omega, seed):
    config = spec.scenario(zeta, sigma, omega, seed)
    stream = generate_stream(config)
    out = []
    for label in spec.policies:
        trace = replay(stream, policy_for(config, label, spec.log_base), config.capacities)
        if spec.write_traces:
            tdir = Path(spec.out_dir) / "traces"
            tdir.mkdir(parents=True, exist_ok=True)
            write_trace_csv(trace, tdir / f"z{zeta}_s{_fmt(sigma)}_w{_fmt(omega)}_seed{seed}_{label}.csv")
        out.append((label, RunMetrics.from_trace(trace), trace.stream_digest))
    return out


def _task_star(args):
    return _run_task(*args)


def _write_gain_files(spec: SweepSpec, reports: dict, out: Path) -> list[Path]:
    written = []
    for zeta in spec.zeta_values:
        for sigma in spec.sigma_values:
            d = out / "gains" / f"sigma{sigma:g}"
            d.mkdir(parents=True, exist_ok=True)
            for metric in METRIC_FIELDS:
                path = d / f"{metric}{zeta}.csv"
                lines = [",".join(gain_columns(metric))]
                for omega in spec.omega_values:
                    gains = reports[(zeta, sigma, omega)].gains
                    row = [_fmt(omega)]
                    lin, exp = gains.get("LinRP"), gains.get("ExpRP")
                    row.append(_fmt(lin[metric].mean) if lin else "")
                    row.append(_fmt(exp[metric].mean) if exp else "")
                    row.append(_fmt(lin[metric].half_width) if lin else "")
                    row.append(_fmt(exp[metric].half_width) if exp else "")
                    lines.append(",".join(row))
                path.write_text("\n".join(lines) + "\n")
                written.append(path)
    return written


def run_sweep(spec: SweepSpec) -> dict:
    """Run every (cell, seed) once, evaluating all policies on the same stream."""
    out = Path(spec.out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        probe = out / ".write-test"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        raise OSError(f"output directory {out} is not writable: {exc}") from exc

    tasks = [(spec, z, s, w, seed) for (z, s, w) in spec.cells() for seed in spec.seeds]
    log.info("sweep: %d cells x %d seeds x %d policies, %d slots each",
             len(spec.cells()), len(spec.seeds), len(spec.policies), spec.slots_per_run)
    if spec.workers > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            results = list(pool.map(_task_star, tasks, chunksize=max(1, len(tasks) // (8 * spec.workers))))
    else:
        results = []
        for i, task in enumerate(tasks, 1):
            results.append(_run_task(*task))
            if i % 100 == 0 or i == len(tasks):
                log.info("sweep: %d/%d runs done", i, len(tasks))

    rows = [",".join(CELL_COLUMNS)]
    per_cell = {}
    hashes_equal = True
    hashes = {}
    for (_, z, s, w, seed), res in zip(tasks, results):
        digests = {d for _, _, d in res}
        hashes_equal &= len(digests) == 1
        hashes[f"zeta={z},sigma={s:g},omega={w:g},seed={seed}"] = {label: d for label, _, d in res}
        runs = per_cell.setdefault((z, s, w), {})
        for label, m, d in res:
            runs.setdefault(label, []).append(m)
            rows.append(",".join([str(z), _fmt(s), _fmt(w), str(seed), label, str(m.total_requests),
                                  str(m.accepted), _fmt(m.average_revenue), _fmt(m.acceptance_ratio),
                                  _fmt(m.average_utilization), d]))
    (out / "cells.csv").write_text("\n".join(rows) + "\n")

    reports = {}
    if "FCFS" in spec.policies:
        reports = {cell: GainReport.from_runs(runs) for cell, runs in per_cell.items()}
        gain_files = _write_gain_files(spec, reports, out)
    else:
        log.warning("FCFS not among the policies; gain files skipped")
        gain_files = []

    extremes = {}
    for metric in METRIC_FIELDS:
        vals = [g[metric].mean for r in reports.values() for g in r.gains.values()]
        if vals:
            extremes[metric] = {"max": max(vals), "min": min(vals)}
    summary = {
        "spec": {k: v for k, v in asdict(spec).items() if k != "out_dir"},
        "cells": len(per_cell),
        "runs": len(tasks),
        "stream_hashes_equal_across_policies": hashes_equal,
        "stream_hashes": hashes,
        "gain_extremes": extremes,
        "gain_files": [str(p.relative_to(out)) for p in gain_files],
    }
    (out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return summary


def parse_config_file(path) -> dict:
    """Read ``key = value`` lines; ``#`` starts a comment. Keys use flag spelling."""
    values = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError("config", str(exc)) from None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"config line {lineno}", f"expected key = value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        values[key.replace("_", "-").lower()] = value
    return values


def default_workers() -> int:
    return max(1, min(os.cpu_count() or 1, 8))

