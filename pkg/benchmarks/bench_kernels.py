"""Time the numba kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each kernel is warmed up once (JIT compile) before timing.  Results from
the two backends are compared so a speedup never hides a wrong answer.
"""
import argparse
import time

import numpy as np

from frameslab import _accel
from frameslab.kernels import bessel, jacobi, pairs


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(rng):
    z = rng.uniform(0.0, 200.0, 200_000)
    pts = rng.uniform(-20, 20, (1500, 2))
    axes = np.array([2.0, 1.0])
    m = rng.standard_normal((200, 200))
    sym = (m + m.T) / 2
    return [
        ("bessel J_1, 2e5 args",
         lambda: bessel.jv_array_loop(2, z), lambda: bessel.jv_array_numpy(2, z)),
        ("bessel J_5/2, 2e5 args",
         lambda: bessel.jv_array_loop(5, z), lambda: bessel.jv_array_numpy(5, z)),
        ("pair rho*, 1500 pts",
         lambda: pairs.pair_support_loop(pts, axes), lambda: pairs.pair_support_numpy(pts, axes)),
        ("jacobi 200x200",
         lambda: jacobi.jacobi_loop(sym, 1e-20, 60)[0], lambda: jacobi.jacobi_numpy(sym, 1e-20, 60)[0]),
    ]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if not _accel.HAS_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':<26}{'numba s':>10}{'numpy s':>10}{'speedup':>9}  max|diff|")
    for name, fast, slow in cases(rng):
        a, b = fast(), slow()
        if name.startswith("jacobi"):
            a, b = np.sort(a), np.sort(b)
        diff = float(np.max(np.abs(a - b)))
        tf = best_of(fast, args.repeat)
        ts = best_of(slow, args.repeat)
        print(f"{name:<26}{tf:>10.4f}{ts:>10.4f}{ts / tf:>9.1f}  {diff:.1e}")


if __name__ == "__main__":
    main()
