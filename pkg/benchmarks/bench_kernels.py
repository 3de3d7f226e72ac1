"""Compare the numba kernels with the plain Python/numpy fallback.

Each backend runs in its own interpreter (the fallback is selected with
OSAC_DISABLE_NUMBA=1 at import time), times ``simulate`` and
``offline_search`` and prints a digest of the outputs so the two paths can be
checked for identical results.

    python benchmarks/bench_kernels.py [--slots N] [--instances K]
"""
import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import hashlib, json, sys, time
import numpy as np
from osac import _jit, kernels
from osac.oracle import OfflineInstance
from osac.simulator import policy_for
from osac.workload import ScenarioConfig, generate_stream

slots, instances = int(sys.argv[1]), int(sys.argv[2])
out = {"numba": _jit.NUMBA_ENABLED}
cfg = ScenarioConfig(omega=0.05, sigma=10, zeta=30, total_slots=slots, seed=1)
s = generate_stream(cfg)
h = hashlib.sha256()
for kind in ("fcfs", "linrp", "exprp"):
    p = policy_for(cfg, kind)
    args = (s.timestamps, s.lifetimes, s.demands, s.revenues, cfg.capacities,
            int(p.kind), p.lin_scale, p.lin_coef, p.exp_scale)
    kernels.simulate(*args)  # warm-up / compile
    t0 = time.perf_counter()
    res = kernels.simulate(*args)
    out[f"simulate_{kind}_s"] = time.perf_counter() - t0
    for a in res:
        h.update(np.ascontiguousarray(a).tobytes())
out["requests"] = len(s)
out["simulate_digest"] = h.hexdigest()[:16]

rng = np.random.default_rng(7)
small = []
for _ in range(instances):
    c = ScenarioConfig(lam=2.0, omega=0.5, sigma=10, zeta=4, total_slots=6, seed=int(rng.integers(2**32)))
    st = generate_stream(c)
    if 0 < len(st) <= 14:
        small.append(OfflineInstance(st, c.capacities, c.total_slots))
args0 = small[0]
kernels.offline_search(args0.requests.timestamps, args0.requests.lifetimes, args0.requests.demands,
                       args0.requests.revenues, args0.capacities, args0.horizon, 1e-9)
h = hashlib.sha256()
t0 = time.perf_counter()
for inst in small:
    r = inst.requests
    x, best = kernels.offline_search(r.timestamps, r.lifetimes, r.demands, r.revenues,
                                     inst.capacities, inst.horizon, 1e-9)
    h.update(np.ascontiguousarray(x).tobytes())
    h.update(np.float64(best).tobytes())
out["offline_s"] = time.perf_counter() - t0
out["offline_instances"] = len(small)
out["offline_digest"] = h.hexdigest()[:16]
print(json.dumps(out))
"""


def run_backend(disable: bool, slots: int, instances: int) -> dict:
    env = dict(os.environ, OSAC_DISABLE_NUMBA="1" if disable else "0")
    proc = subprocess.run([sys.executable, "-c", WORKER, str(slots), str(instances)],
                          env=env, capture_output=True, text=True, check=True)
    return json.loads(proc.stdout.strip().splitlines()[-1])


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--slots", type=int, default=20_000)
    ap.add_argument("--instances", type=int, default=200)
    args = ap.parse_args(argv)

    fast = run_backend(False, args.slots, args.instances)
    slow = run_backend(True, args.slots, args.instances)
    print(f"{'kernel':<18}{'numba':>12}{'fallback':>12}{'speedup':>10}")
    for key in ("simulate_fcfs_s", "simulate_linrp_s", "simulate_exprp_s", "offline_s"):
        name = key[:-2]
        print(f"{name:<18}{fast[key]:>11.4f}s{slow[key]:>11.4f}s{slow[key] / fast[key]:>9.1f}x")
    n = fast["requests"]
    print(f"simulate: {n} requests per policy, {fast['simulate_linrp_s'] / n * 1e9:.0f} ns/request compiled")
    print(f"offline_search: {fast['offline_instances']} instances")
    same = (fast["simulate_digest"] == slow["simulate_digest"]
            and fast["offline_digest"] == slow["offline_digest"])
    print(f"outputs identical across backends: {same}")
    if not fast["numba"]:
        print("warning: numba unavailable, both runs used the fallback")
    return 0 if same else 1


if __name__ == "__main__":
    sys.exit(main())
