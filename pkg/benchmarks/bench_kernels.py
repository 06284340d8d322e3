"""Time the numba and numpy kernel backends, then one full point evaluation.

    python3 benchmarks/bench_kernels.py [--repeat 2000]

The full-pipeline timing runs in two subprocesses so that the env flag
``RECURB_NUMBA`` picks the backend exactly as it would for a user.
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from recurb import _kernels as K


def make_inputs(n=2, p=2, m=5, seed=0):
    rng = np.random.default_rng(seed)
    sig = np.ones(m)
    d1 = rng.normal(size=(n, m))
    d2 = rng.normal(size=(n, n, m))
    g = d1 @ d1.T + np.eye(n)
    b = rng.normal(size=(p, n, n))
    omega = rng.normal(size=(n, p, p))
    return {
        "gram": (d1, sig),
        "christoffel": (d1, d2, np.linalg.inv(g), sig),
        "second_form": (d2, rng.normal(size=(p, m)), sig),
        "riemann": (rng.normal(size=(n, n, n)), rng.normal(size=(n, n, n, n)), g),
        "nabla_b": (b, rng.normal(size=(n, p, n, n)), rng.normal(size=(n, n, n)), omega),
        "normal_curvature": (omega, rng.normal(size=(n, n, p, p))),
        "gauss_rhs": (g, b, 1.0),
    }


PIPELINE = """
import time
from recurb import catalog, analysis
e = catalog.instantiate('perturbed-torus-E4')
analysis.classify(e.chart, e.ambient, (3,))  # warm-up, includes any compile
t = time.perf_counter()
for _ in range({reps}):
    analysis.classify(e.chart, e.ambient, (5,))
print((time.perf_counter() - t) / {reps})
"""


def pipeline_time(flag, reps):
    env = dict(os.environ, RECURB_NUMBA=flag)
    out = subprocess.run([sys.executable, "-c", PIPELINE.format(reps=reps)],
                         env=env, capture_output=True, text=True, check=True)
    return float(out.stdout.strip())


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=2000)
    ap.add_argument("--pipeline-reps", type=int, default=3)
    args = ap.parse_args()

    inputs = make_inputs()
    print(f"{'kernel':<18}{'numpy us':>12}{'numba us':>12}{'speedup':>10}")
    for name in K.NAMES:
        call = inputs[name]
        K.NUMBA[name](*call)  # compile outside the timed region
        t_np = timeit.timeit(lambda: K.NUMPY[name](*call), number=args.repeat)
        t_nb = timeit.timeit(lambda: K.NUMBA[name](*call), number=args.repeat)
        us_np, us_nb = 1e6 * t_np / args.repeat, 1e6 * t_nb / args.repeat
        print(f"{name:<18}{us_np:>12.2f}{us_nb:>12.2f}{us_np / us_nb:>10.1f}x")

    t0 = pipeline_time("0", args.pipeline_reps)
    t1 = pipeline_time("1", args.pipeline_reps)
    print(f"\nclassify 5x5 perturbed-torus-E4: numpy {t0 * 1e3:.1f} ms, "
          f"numba {t1 * 1e3:.1f} ms ({t0 / t1:.2f}x)")


if __name__ == "__main__":
    main()
