"""Compare the numba kernels with the pure numpy/Python fallback.

Each backend runs in its own interpreter because the choice is fixed at
import time by CONELAB_NUMBA. Usage::

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import json
import os
import subprocess
import sys

WORKLOAD = r"""
import json, sys, time
import numpy as np
import conelab.cones as C
from conelab import _kernels as K

repeat = int(sys.argv[1])
rng = np.random.default_rng(0)
cases = {
    "lorentz_gauge": (C.Lorentz(5), C.gauge),
    "pnorm_gauge_bisection": (C.PNorm(4, 3.0), C.gauge),
    "lens_gauge_bisection": (C.CrossSection2D(C.Lens(0.5)), C.gauge),
    "pnorm_variational": (C.PNorm(3, 4.0), C.gauge_variational),
    "order_unit_norm": (C.PNorm(4, 3.0), None),
}
# warm-up triggers any JIT compilation outside the timed region
for cone, fn in cases.values():
    x, y = C.sample_interior(cone, rng, 2)
    (fn or (lambda c, a, b: C.order_unit_norm(c, a - b)))(cone, x, y)

out = {"backend": K.BACKEND}
for name, (cone, fn) in cases.items():
    xs = C.sample_interior(cone, rng, 200)
    ys = C.sample_interior(cone, rng, 200)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        for x, y in zip(xs, ys):
            if fn is None:
                C.order_unit_norm(cone, x - y)
            else:
                fn(cone, x, y)
        best = min(best, time.perf_counter() - t0)
    out[name] = best / len(xs) * 1e6
print(json.dumps(out))
"""


def run(flag, repeat):
    env = dict(os.environ, CONELAB_NUMBA=flag)
    res = subprocess.run([sys.executable, "-c", WORKLOAD, str(repeat)], env=env, capture_output=True, text=True, check=True)
    return json.loads(res.stdout)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    fast, slow = run("1", args.repeat), run("0", args.repeat)
    print(f"{'kernel':<24}{fast['backend'] + ' us/call':>16}{slow['backend'] + ' us/call':>16}{'speedup':>10}")
    for key in fast:
        if key == "backend":
            continue
        print(f"{key:<24}{fast[key]:>16.1f}{slow[key]:>16.1f}{slow[key] / fast[key]:>9.1f}x")


if __name__ == "__main__":
    main()
