"""Compiled vs pure-Python RK4 kernels.

    python3 benchmarks/bench_kernels.py [--repeat N]

Prints one JSON line per (kernel, backend) with the best wall time and the
speedup over the pure-Python backend.
"""

import argparse
import json
import time
from fractions import Fraction

import numpy as np

from kowtower import kernels
from kowtower.numverify.flows import c2_coeffs, default_initial


def _best(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--steps", type=int, default=20000)
    a = ap.parse_args(argv)
    y0 = np.array([1.0, 0.0, 1.0, 0.0, 1.0, 0.0])
    fc = c2_coeffs(Fraction(3, 2), 5)
    (x1, u1), (x2, u2) = default_initial(Fraction(3, 2), 5).points
    s0 = [x1, x2, u1, u2]
    cases = {
        "rk4_top": lambda m: m.rk4_top(y0, 1e-3, a.steps, 100),
        "rk4_dubrovin": lambda m: m.rk4_dubrovin(s0, fc, 1e-5, a.steps, 100),
    }
    backends = kernels.backends()
    if "cython" not in backends:
        print("# compiled extension not built; timing the Python backend only")
    for name, run in cases.items():
        base = None
        for backend, mod in backends.items():
            t = _best(lambda: run(mod), a.repeat)
            base = base or t
            print(json.dumps({"kernel": name, "backend": backend, "steps": a.steps,
                              "seconds": round(t, 5), "speedup": round(base / t, 1)}))


if __name__ == "__main__":
    main()
