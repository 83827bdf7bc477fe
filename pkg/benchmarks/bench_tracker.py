"""Compare the numba and pure-numpy tracker backends.

Each backend runs in its own interpreter because the backend is fixed at
import time by ``TORUSTOP_DISABLE_NUMBA``.  Usage::

    python benchmarks/bench_tracker.py [--k 4 6 8] [--repeats 3]
"""

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time, warnings
import numpy as np
from torustop._accel import BACKEND
from torustop.arrangements import generic_lines
from torustop.critical import MasterProblem, critical_system, solve
warnings.simplefilter("ignore")
ks, repeats = json.loads(sys.argv[1]), int(sys.argv[2])
out = {"backend": BACKEND, "runs": []}
solve(critical_system(MasterProblem(arrangement=generic_lines(3))), 0)  # compile / warm caches
for k in ks:
    u = tuple(int(v) for v in np.random.default_rng(k).integers(1, 50, size=k))
    system = critical_system(MasterProblem(arrangement=generic_lines(k, u)))
    times, count = [], None
    for r in range(repeats):
        t0 = time.perf_counter()
        count = solve(system, seed=r).count
        times.append(time.perf_counter() - t0)
    out["runs"].append({"k": k, "paths": (k - 1) ** 2, "count": count, "best_s": min(times)})
print(json.dumps(out))
"""


def run_backend(disable_numba: bool, ks, repeats: int) -> dict:
    env = dict(os.environ)
    env["TORUSTOP_DISABLE_NUMBA"] = "1" if disable_numba else "0"
    env.setdefault("TORUSTOP_THREADS", "1")
    proc = subprocess.run(
        [sys.executable, "-c", WORKER, json.dumps(ks), str(repeats)],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    return json.loads(proc.stdout.strip().splitlines()[-1])


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--k", type=int, nargs="+", default=[4, 6, 8])
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args(argv)

    fast = run_backend(False, args.k, args.repeats)
    slow = run_backend(True, args.k, args.repeats)
    print(f"{'k':>3} {'paths':>6} {'count':>6} {fast['backend']:>10} {slow['backend']:>10} {'speedup':>8}")
    agree = True
    for a, b in zip(fast["runs"], slow["runs"]):
        agree &= a["count"] == b["count"]
        print(
            f"{a['k']:>3} {a['paths']:>6} {a['count']:>6} {a['best_s']:>9.3f}s {b['best_s']:>9.3f}s "
            f"{b['best_s'] / a['best_s']:>7.1f}x"
        )
    if not agree:
        print("backends disagree on the critical-point count", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
