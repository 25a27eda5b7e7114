"""Compare the numba-compiled kernels with their pure-numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat N]

Part one times each kernel variant in-process (compilation excluded).  Part
two times an end-to-end workload in fresh interpreters with
``GLIDEPATH_NUMBA=1`` and ``GLIDEPATH_NUMBA=0``, compilation included.
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from glidepath import kernels

WORKLOAD = """
import time
import numpy as np
from glidepath import formats
from glidepath.estimation import estimate_series
from glidepath.planner import generate_all
t0 = time.perf_counter()
scn = formats.load_scenario("us1549_t4_g19")
for _ in range(3):
    generate_all(scn.start, scn.runways, scn.banks, scn.model)
estimate_series(formats.parse_fdr(formats.data_path("us1549_fdr_corrected.csv")))
print(f"{time.perf_counter() - t0:.3f}")
"""


def kernel_cases(rng):
    n = 4096
    x0, y0, x1, y1 = rng.uniform(-2e4, 2e4, (4, n))
    h0, h1 = rng.uniform(0, 360, (2, n))
    r = rng.uniform(100, 9000, n)
    csc = (x0, y0, h0, x1, y1, h1, r)

    m = 5000
    x, y = np.cumsum(rng.uniform(-50, 50, (2, m)), axis=1)
    z = np.linspace(5000, 20, m)
    bank = rng.choice([0.0, 45.0], m)
    sums = (x, y, z, bank, 0.0, 0.0, 20.0, 20.0, 50.0)

    k = 20000
    speed = rng.uniform(180, 200, k)
    alt = 10000 - np.cumsum(rng.uniform(10, 14, k))
    dist, loss = kernels._instant_terms_numpy(speed, alt, 4)
    ratio = dist / loss
    stats = (ratio, alt, np.zeros(k), np.zeros(k, dtype=np.int64), 10, 13, 4)
    return {
        "csc_components": csc,
        "trajectory_sums": sums,
        "instant_terms": (speed, alt, 4),
        "window_stats": stats,
    }


def bench_kernels(repeat):
    rng = np.random.default_rng(0)
    print(f"{'kernel':<18}{'numba ms':>10}{'numpy ms':>10}{'speedup':>9}")
    for name, args in kernel_cases(rng).items():
        loop = getattr(kernels, f"_{name}_loop")
        vec = getattr(kernels, f"_{name}_numpy")
        loop(*args)  # compile
        t_loop = min(timeit.repeat(lambda: loop(*args), number=1, repeat=repeat))
        t_vec = min(timeit.repeat(lambda: vec(*args), number=1, repeat=repeat))
        print(f"{name:<18}{t_loop * 1e3:>10.3f}{t_vec * 1e3:>10.3f}{t_vec / t_loop:>8.1f}x")


def bench_end_to_end():
    print("\nend-to-end (3 x plan us1549_t4_g19 + FDR estimate), fresh interpreter")
    for flag in ("1", "0"):
        env = dict(os.environ, GLIDEPATH_NUMBA=flag)
        out = subprocess.run([sys.executable, "-c", WORKLOAD], env=env, check=True,
                             capture_output=True, text=True).stdout.strip()
        print(f"GLIDEPATH_NUMBA={flag}: {out} s")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=20)
    args = parser.parse_args()
    bench_kernels(args.repeat)
    bench_end_to_end()


if __name__ == "__main__":
    main()
