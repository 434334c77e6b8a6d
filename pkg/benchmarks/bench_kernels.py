"""Compare the numba kernels with their pure-Python fallbacks.

Each backend runs in its own interpreter because the fallback is selected at
import time through PAIRLAT_DISABLE_JIT. Usage::

    python benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import json
import os
import subprocess
import sys
import time

CASES = ["hardcore_entries N=101", "sym_eig native 150", "complex_eig SSH 20 cells",
         "bessel_j_table 200 x=30"]


def run_cases(repeat):
    import numpy as np

    from pairlat import kernels
    from pairlat.solvers import complex_eig, sym_eig
    from pairlat.ssh import SSHParams, build_ssh_matrix

    rng = np.random.default_rng(7)
    a = rng.standard_normal((150, 150))
    a = a + a.T
    h = build_ssh_matrix(SSHParams(1.0, 0.8, -0.85, 20))
    calls = {
        CASES[0]: lambda: kernels.hardcore_entries(101, 1.0, 0.4, 0.0),
        CASES[1]: lambda: sym_eig(a, method="native"),
        CASES[2]: lambda: complex_eig(h),
        CASES[3]: lambda: kernels.bessel_j_table(200, 30.0),
    }
    out = {}
    for name, f in calls.items():
        t0 = time.perf_counter()
        f()  # includes compilation or cache load
        first = time.perf_counter() - t0
        best = float("inf")
        for _ in range(repeat):
            t0 = time.perf_counter()
            f()
            best = min(best, time.perf_counter() - t0)
        out[name] = {"first": first, "best": best}
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--child", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()
    if args.child:
        print(json.dumps(run_cases(args.repeat)))
        return
    results = {}
    for label, flag in (("numba", "0"), ("python", "1")):
        env = dict(os.environ, PAIRLAT_DISABLE_JIT=flag)
        proc = subprocess.run([sys.executable, __file__, "--child", "--repeat", str(args.repeat)],
                              env=env, capture_output=True, text=True, check=True)
        results[label] = json.loads(proc.stdout.strip().splitlines()[-1])
    print(f"{'kernel':28s} {'numba':>10s} {'python':>10s} {'speedup':>8s}")
    for name in CASES:
        jb, pb = results["numba"][name]["best"], results["python"][name]["best"]
        print(f"{name:28s} {jb:10.4f} {pb:10.4f} {pb / jb:8.1f}x")


if __name__ == "__main__":
    main()
