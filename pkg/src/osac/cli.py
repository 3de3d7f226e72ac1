"""Command line entry point: ``osac {sweep,run,generate,replay,oracle}``.

Flags override values from ``--config FILE`` (flat ``key = value`` lines
using the long flag names). Logs go to stderr, data to files or stdout.
"""
from __future__ import annotations

import argparse
import logging
import sys

import numpy as np

from .errors import OSACError, UndefinedMetricError
from .metrics import RunMetrics
from .oracle import OfflineInstance, feasibility_check, offline_optimal
from .policy import LOG_BASES, PolicyParams
from .simulator import policy_for, replay, write_trace_csv
from .sweep import (DEFAULT_OMEGAS, DEFAULT_SIGMAS, DEFAULT_SLOTS, DEFAULT_ZETAS, FULL_SCALE_SLOTS,
                    SweepSpec, parse_config_file, run_sweep)
from .workload import ALPHA_MODES, ScenarioConfig, generate_stream, read_stream_csv, write_stream_csv

log = logging.getLogger("osac")

_LIST_KEYS = {"omega", "sigma", "zeta", "seeds", "policy"}


def _split(value: str) -> list[str]:
    return [v for v in value.replace(",", " ").split() if v]


def _merge(args, parser):
    """Fill unset flags from the config file; flags always win."""
    if not getattr(args, "config", None):
        return args
    known = {a.dest.replace("_", "-"): a for a in parser._actions}
    for key, raw in parse_config_file(args.config).items():
        action = known.get(key) or known.get({"lambda": "lam"}.get(key, key))
        if action is None:
            raise OSACError(f"config: unknown key {key!r}")
        if getattr(args, action.dest) is not None:
            continue
        if key in _LIST_KEYS and (action.nargs == "+" or isinstance(action, argparse._AppendAction)):
            value = [action.type(v) if action.type else v for v in _split(raw)]
        elif action.nargs == 0:
            value = raw.lower() in ("1", "true", "yes", "on")
        else:
            value = action.type(raw) if action.type else raw
        setattr(args, action.dest, value)
    return args


def _scenario_flags(p, multi: bool):
    nargs = "+" if multi else None
    p.add_argument("--omega", type=float, nargs=nargs, help="Beta(omega, omega) inequality parameter")
    p.add_argument("--sigma", type=float, nargs=nargs, help="economic scale, unit values in [1, sigma]")
    p.add_argument("--zeta", type=int, nargs=nargs, help="lifetime upper bound")
    p.add_argument("--lambda", dest="lam", type=float, help="mean arrivals per slot (default 2)")
    p.add_argument("--slots", type=int, help=f"time slots per run (default {DEFAULT_SLOTS})")
    p.add_argument("--full-scale", action="store_const", const=True,
                   help=f"use {FULL_SCALE_SLOTS:.0e} slots per run")
    p.add_argument("--alpha-mode", choices=ALPHA_MODES)
    p.add_argument("--log-base", choices=LOG_BASES)
    p.add_argument("--config", help="key = value file; flags take precedence")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="osac", description="Online slice admission control simulator")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="run the (omega, sigma, zeta) grid and write gain CSVs")
    _scenario_flags(p, multi=True)
    p.add_argument("--seeds", type=int, nargs="+")
    p.add_argument("--policy", action="append", type=str.lower, choices=["fcfs", "linrp", "exprp"])
    p.add_argument("--out", help="output directory (default ./results)")
    p.add_argument("--workers", type=int, help="worker processes (default 1)")
    p.add_argument("--traces", action="store_const", const=True, help="also write per-policy decision traces")

    p = sub.add_parser("run", help="run one scenario under one policy and print metrics")
    _scenario_flags(p, multi=False)
    p.add_argument("--seed", type=int)
    p.add_argument("--policy", type=str.lower, choices=["fcfs", "linrp", "exprp"])
    p.add_argument("--trace-out", help="write the decision trace CSV here")

    p = sub.add_parser("generate", help="write a scenario's request stream as CSV")
    _scenario_flags(p, multi=False)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)

    p = sub.add_parser("replay", help="evaluate a policy on a request-stream CSV")
    p.add_argument("stream")
    p.add_argument("--policy", type=str.lower, choices=["fcfs", "linrp", "exprp"], default="fcfs")
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--capacities", type=float, nargs="+", default=None)
    p.add_argument("--log-base", choices=LOG_BASES, default="natural")
    p.add_argument("--trace-out")

    p = sub.add_parser("oracle", help="exact offline optimum of a small request-stream CSV")
    p.add_argument("stream")
    p.add_argument("--capacities", type=float, nargs="+", default=None)
    return parser


def _or(value, default):
    return default if value is None else value


def _slots(args) -> int:
    return FULL_SCALE_SLOTS if args.full_scale else _or(args.slots, DEFAULT_SLOTS)


def _single_config(args) -> ScenarioConfig:
    return ScenarioConfig(
        lam=_or(args.lam, 2.0), omega=_or(args.omega, 1.0), sigma=_or(args.sigma, 10.0),
        zeta=_or(args.zeta, 10), total_slots=_slots(args), seed=_or(args.seed, 0),
        alpha_mode=_or(args.alpha_mode, "uniform-equal"),
    )


def cmd_sweep(args) -> int:
    spec = SweepSpec(
        omega_values=_or(args.omega, list(DEFAULT_OMEGAS)),
        sigma_values=_or(args.sigma, list(DEFAULT_SIGMAS)),
        zeta_values=_or(args.zeta, list(DEFAULT_ZETAS)),
        slots_per_run=_slots(args),
        seeds=_or(args.seeds, list(range(10))),
        policies=_or(args.policy, ["fcfs", "linrp", "exprp"]),
        out_dir=_or(args.out, "results"),
        lam=_or(args.lam, 2.0),
        alpha_mode=_or(args.alpha_mode, "uniform-equal"),
        log_base=_or(args.log_base, "natural"),
        workers=_or(args.workers, 1),
        write_traces=bool(args.traces),
    )
    summary = run_sweep(spec)
    log.info("wrote %d cells to %s", summary["cells"], spec.out_dir)
    return 0


def cmd_run(args) -> int:
    config = _single_config(args)
    trace = replay(generate_stream(config), policy_for(config, _or(args.policy, "fcfs"), _or(args.log_base, "natural")),
                   config.capacities)
    if args.trace_out:
        write_trace_csv(trace, args.trace_out)
    print(RunMetrics.from_trace(trace).line())
    return 0


def cmd_generate(args) -> int:
    config = _single_config(args)
    stream = generate_stream(config)
    write_stream_csv(stream, args.out)
    log.info("wrote %d requests to %s", len(stream), args.out)
    return 0


def cmd_replay(args) -> int:
    stream = read_stream_csv(args.stream)
    caps = np.asarray(_or(args.capacities, [1.0] * stream.m), dtype=np.float64)
    params = PolicyParams.for_capacities(args.policy, args.theta, caps, args.log_base)
    trace = replay(stream, params, caps)
    if args.trace_out:
        write_trace_csv(trace, args.trace_out)
    print(RunMetrics.from_trace(trace).line())
    return 0


def cmd_oracle(args) -> int:
    stream = read_stream_csv(args.stream)
    caps = np.asarray(_or(args.capacities, [1.0] * stream.m), dtype=np.float64)
    inst = OfflineInstance(stream, caps, stream.total_slots)
    x, best = offline_optimal(inst)
    assert feasibility_check(x, inst)
    ids = " ".join(str(int(i)) for i in stream.ids[x])
    print(f"revenue={best!r} accepted={int(x.sum())} ids={ids}")
    return 0


COMMANDS = {"sweep": cmd_sweep, "run": cmd_run, "generate": cmd_generate, "replay": cmd_replay, "oracle": cmd_oracle}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose > 1 else logging.INFO if args.verbose else logging.WARNING,
        format="%(asctime)s %(name)s %(levelname)s %(message)s", stream=sys.stderr,
    )
    try:
        sub = parser._subparsers._group_actions[0].choices[args.command]
        _merge(args, sub)
        return COMMANDS[args.command](args)
    except UndefinedMetricError as exc:
        print(f"osac: undefined metric: {exc}", file=sys.stderr)
        return 3
    except (OSACError, OSError) as exc:
        print(f"osac: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
