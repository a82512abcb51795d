"""Compare the JIT-compiled solver kernel against the pure-Python fallback.

The backend is chosen at import time from the RADOSAT_NO_NUMBA environment
variable, so each configuration runs in a subprocess. Usage:

    python3 benchmarks/compare_backends.py [--repeat N]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time

CASES = [
    # (equation, colors, n) -- boundary instances around known Rado numbers
    ("x+y=z", 3, 13),
    ("x+y=z", 3, 14),
    ("x-y=2z", 3, 42),
    ("x-y=2z", 3, 43),
    ("2(x+y)=3z", 3, 54),
]

WORKER = r"""
import json, sys, time
from radosat.equation import parse_equation
from radosat.encoder import build_formula
from radosat.solver import solve, BackendConfig

cases = json.loads(sys.argv[1])
cfg = BackendConfig()
# Warm-up: trigger JIT compilation outside the timed region.
warm = build_formula(parse_equation("x+y=z"), 6, 2)
solve(warm, cfg)

rows = []
for eqs, k, n in cases:
    formula = build_formula(parse_equation(eqs), n, k, symmetry=True)
    t0 = time.perf_counter()
    verdict = solve(formula, cfg)
    rows.append({
        "equation": eqs, "k": k, "n": n, "status": verdict.status,
        "backend": verdict.backend, "seconds": time.perf_counter() - t0,
        "conflicts": verdict.conflicts,
    })
print(json.dumps(rows))
"""


def run_backend(no_numba: bool, repeat: int) -> list[dict]:
    env = dict(os.environ)
    env["RADOSAT_NO_NUMBA"] = "1" if no_numba else ""
    best: list[dict] = []
    for _ in range(repeat):
        out = subprocess.run(
            [sys.executable, "-c", WORKER, json.dumps(CASES)],
            env=env, capture_output=True, text=True, check=True,
        )
        rows = json.loads(out.stdout)
        if not best:
            best = rows
        else:
            for cur, new in zip(best, rows):
                if new["seconds"] < cur["seconds"]:
                    cur["seconds"] = new["seconds"]
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3,
                        help="Runs per backend; best time is kept.")
    args = parser.parse_args()

    jit = run_backend(no_numba=False, repeat=args.repeat)
    pure = run_backend(no_numba=True, repeat=args.repeat)

    print(f"{'instance':<24} {'status':<6} {'jit (s)':>9} "
          f"{'python (s)':>11} {'speedup':>8}")
    for j, p in zip(jit, pure):
        assert j["status"] == p["status"]
        name = f"{j['equation']} k={j['k']} n={j['n']}"
        speed = p["seconds"] / j["seconds"] if j["seconds"] > 0 else float("inf")
        print(f"{name:<24} {j['status']:<6} {j['seconds']:>9.3f} "
              f"{p['seconds']:>11.3f} {speed:>7.1f}x")


if __name__ == "__main__":
    main()
