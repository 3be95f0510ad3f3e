"""Timing comparison for the batched dimension kernels.

Runs the group-law suite once on the numba backend and once on the
pure-numpy fallback (forced via DIMCHECK_NO_NUMBA in a subprocess) and
prints the wall-clock numbers side by side.

Usage: python benchmarks/bench_kernels.py [cases] [seed]
"""

import json
import os
import subprocess
import sys
import time

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

WORKER = """
import json, sys, time
from dimcheck import kernels
kernels.warmup()
start = time.perf_counter()
result = kernels.run_group_law_suite(int(sys.argv[1]), int(sys.argv[2]))
elapsed = time.perf_counter() - start
print(json.dumps({"backend": kernels.backend(), "elapsed": elapsed, "result": result}))
"""


def run_backend(cases: int, seed: int, force_numpy: bool) -> dict:
    env = dict(os.environ)
    env["DIMCHECK_NO_NUMBA"] = "1" if force_numpy else "0"
    env["PYTHONPATH"] = os.pathsep.join(
        [os.path.join(os.path.dirname(__file__), "..", "src"), env.get("PYTHONPATH", "")]
    )
    out = subprocess.run(
        [sys.executable, "-c", WORKER, str(cases), str(seed)],
        env=env,
        check=True,
        capture_output=True,
        text=True,
    )
    return json.loads(out.stdout.strip().splitlines()[-1])


def main() -> int:
    cases = int(sys.argv[1]) if len(sys.argv) > 1 else 100_000
    seed = int(sys.argv[2]) if len(sys.argv) > 2 else 0

    print(f"group-law suite, {cases} cases per law, seed {seed}")
    rows = []
    for force_numpy in (False, True):
        started = time.perf_counter()
        data = run_backend(cases, seed, force_numpy)
        total = time.perf_counter() - started
        rows.append((data["backend"], data["elapsed"], total, data["result"]))

    print(f"{'backend':<8} {'suite (s)':>10} {'process (s)':>12} failures")
    for backend, elapsed, total, result in rows:
        failures = sum(v for k, v in result.items() if k not in ("cases", "evaluations"))
        print(f"{backend:<8} {elapsed:>10.3f} {total:>12.3f} {failures}")

    if rows[0][0] == rows[1][0]:
        print("note: numba unavailable, both runs used the numpy fallback")
    else:
        ratio = rows[1][1] / rows[0][1] if rows[0][1] else float("inf")
        print(f"numba speedup over numpy: {ratio:.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
