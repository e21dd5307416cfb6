"""Compare the compiled and the exact Smith normal form paths.

    python3 benchmarks/bench_snf.py [--count 500] [--repeat 3]

Run with TDUAL_DISABLE_JIT=1 to confirm the fallback is picked up; the
compiled column is then reported as unavailable.
"""

import argparse
import time

import numpy as np

from tdual.kernels import smith_normal_form, snf_exact, snf_int64, to_object
from tdual._jit import jit_enabled


def batch(rng, count, size, bound):
    return [rng.integers(-bound, bound + 1, size=(size, size)) for _ in range(count)]


def time_path(mats, use_jit, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        for M in mats:
            smith_normal_form(M, use_jit=use_jit)
        best = min(best, time.perf_counter() - t)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=500)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)

    if jit_enabled():
        # compile outside the timed region
        snf_int64(np.eye(2, dtype=np.int64))

    print(f"numba enabled: {jit_enabled()}")
    print(f"{'size':>6} {'bound':>6} {'exact [s]':>10} {'jit [s]':>10} {'speedup':>8}")
    for size, bound in [(2, 20), (4, 20), (6, 20), (8, 20), (8, 1000), (12, 20)]:
        mats = batch(rng, args.count, size, bound)
        # both paths must agree before timing means anything
        for M in mats[:20]:
            a = smith_normal_form(M, use_jit=True)[1]
            b = snf_exact(to_object(M))[1]
            assert (a == b).all()
        t_exact = time_path(mats, False, args.repeat)
        if jit_enabled():
            t_jit = time_path(mats, True, args.repeat)
            print(f"{size:>6} {bound:>6} {t_exact:>10.4f} {t_jit:>10.4f} {t_exact / t_jit:>7.2f}x")
        else:
            print(f"{size:>6} {bound:>6} {t_exact:>10.4f} {'n/a':>10} {'':>8}")


if __name__ == "__main__":
    main()
