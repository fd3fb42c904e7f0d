"""Time the hot kernels under numba and under the plain-numpy fallback.

    python3 benchmarks/bench_kernels.py            # both backends, side by side
    python3 benchmarks/bench_kernels.py --single   # current backend only, JSON

The backend is fixed at import time, so each one runs in its own
subprocess with SPINGEO_DISABLE_NUMBA set accordingly. Compilation is
excluded: every kernel is called once before timing.
"""
import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np


def _best_of(fn, repeat, number):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        for _ in range(number):
            fn()
        best = min(best, (time.perf_counter() - start) / number)
    return best


def run_single(repeat):
    from spingeo import kernels
    from spingeo._accel import backend_name
    from spingeo.decoherence import build_projectors
    from spingeo.states import random_density_matrix

    rng = np.random.default_rng(7)
    rho = np.ascontiguousarray(random_density_matrix(rng).mat)
    proj = np.ascontiguousarray(build_projectors("C", 0.7, 1.9).projectors)
    c = rng.uniform(-1, 1, size=(3, 3))

    cases = {
        "jacobi_eigh 4x4": (lambda: kernels.jacobi_eigh(rho, 50), 200),
        "svd3_sweeps 3x3": (lambda: kernels.svd3_sweeps(c, 50), 200),
        "dissipator_rhs": (lambda: kernels.dissipator_rhs(rho, proj, 1.0), 200),
        "rk4_propagate 1000 steps": (lambda: kernels.rk4_propagate(rho, proj, 1.0, 1e-3, 1000, 0.0), 2),
    }
    out = {"backend": backend_name(), "seconds": {}}
    for name, (fn, number) in cases.items():
        fn()  # warm-up / compile
        out["seconds"][name] = _best_of(fn, repeat, number)
    return out


def run_backend(disable, repeat):
    env = dict(os.environ, SPINGEO_DISABLE_NUMBA="1" if disable else "0")
    proc = subprocess.run(
        [sys.executable, __file__, "--single", "--repeat", str(repeat)],
        env=env, capture_output=True, text=True, check=True,
    )
    return json.loads(proc.stdout)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--single", action="store_true", help="time the current backend and print JSON")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    if args.single:
        print(json.dumps(run_single(args.repeat)))
        return 0

    fast = run_backend(False, args.repeat)
    slow = run_backend(True, args.repeat)
    print(f"{'kernel':<28}{fast['backend']:>14}{slow['backend']:>14}{'speedup':>10}")
    for name, t_fast in fast["seconds"].items():
        t_slow = slow["seconds"][name]
        print(f"{name:<28}{t_fast * 1e6:>12.1f}us{t_slow * 1e6:>12.1f}us{t_slow / t_fast:>9.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
