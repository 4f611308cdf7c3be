"""Compare the compiled and pure-Python kernels on the solver's hot loops.

Run with ``python3 benchmarks/bench_kernels.py [--repeat N]``.
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from carnot_cut import _pykernels, kernels


def _time(fn, number, repeat):
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def bench_kernels(repeat):
    try:
        from carnot_cut import _ckernels
    except ImportError:
        _ckernels = None
    p = np.array([0.7, -0.2, 0.4, 1.1, 2.3, -0.8])
    cases = [
        ("exp_cross", lambda m: (lambda: m.exp_cross(p, 1.0)), 2000),
        ("exp_cross_jac", lambda m: (lambda: m.exp_cross_jac(p, 1.0)), 500),
        ("rk4_cross 1000 steps", lambda m: (lambda: m.rk4_cross(p, 1.0, 1000)), 5),
    ]
    print(f"{'kernel':<24}{'python [us]':>14}{'cython [us]':>14}{'speedup':>10}")
    for name, make, number in cases:
        t_py = _time(make(_pykernels), number, repeat) * 1e6
        if _ckernels is None:
            print(f"{name:<24}{t_py:>14.2f}{'n/a':>14}{'':>10}")
            continue
        t_c = _time(make(_ckernels), number, repeat) * 1e6
        print(f"{name:<24}{t_py:>14.2f}{t_c:>14.2f}{t_py / t_c:>10.1f}")


def bench_distance():
    """End-to-end shooting; each backend runs in a fresh interpreter."""
    code = ("import time, numpy as np\n"
            "from carnot_cut import GroupPoint, distance, BACKEND\n"
            "p = GroupPoint([0.3, -0.5, 0.2], [0.1, 0.4, -0.2])\n"
            "distance(p)\n"
            "t = time.perf_counter(); d = distance(p).distance\n"
            "print(BACKEND, d, time.perf_counter() - t)\n")
    print(f"{'distance() backend':<24}{'seconds':>14}{'value':>22}")
    for pure in ("1", "0"):
        env = dict(os.environ, CARNOT_CUT_PURE=pure)
        out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
        backend, d, sec = out.stdout.split()
        print(f"{backend:<24}{float(sec):>14.3f}{float(d):>22.15f}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print(f"default backend: {kernels.BACKEND}")
    bench_kernels(args.repeat)
    bench_distance()


if __name__ == "__main__":
    main()
