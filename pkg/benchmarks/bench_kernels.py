#!/usr/bin/env python3
"""Compare the numba and numpy backends of the integer search kernels.

Numba is warmed up first so compilation time is not counted.  Every case is
also checked for identical results across backends.

    python benchmarks/bench_kernels.py [--repeat N] [--json out.json]
"""

import argparse
import json
import statistics
import sys
import time

from hedgehog import _kernels

# (name, kernel, coeffs, height, extra kwargs)
CASES = [
    ("zero_search <1,1,1,-7> H=40", "zero_search", [1, 1, 1, -7], 40, {}),
    ("zero_search <3,5,7,-1> H=60", "zero_search", [3, 5, 7, -1], 60, {"need_last_nonzero": True}),
    ("zero_search <1,2,3,5,-97> H=12", "zero_search", [1, 2, 3, 5, -97], 12, {}),
    ("zero_search <2,3,-6> H=400 (no zero)", "zero_search", [2, 3, -6], 400, {}),
    ("box_values <1,2,3,5> H=30", "box_values", [1, 2, 3, 5], 30, {}),
    ("box_values <1,1,1> H=120", "box_values", [1, 1, 1], 120, {}),
]


def run_case(kernel, coeffs, height, kwargs, backend):
    fn = getattr(_kernels, kernel)
    return fn(coeffs, height, backend=backend, **kwargs)


def timeit(kernel, coeffs, height, kwargs, backend, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        run_case(kernel, coeffs, height, kwargs, backend)
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", help="write results here")
    args = ap.parse_args(argv)

    if not _kernels.HAVE_NUMBA:
        print("numba is not installed; nothing to compare")
        return 1

    # warm-up: trigger compilation on tiny inputs
    _kernels.zero_search([1, -1], 1, backend="numba")
    _kernels.box_values([1], 1, backend="numba")

    rows = []
    print(f"{'case':42s} {'numpy [ms]':>11s} {'numba [ms]':>11s} {'speedup':>8s}")
    for name, kernel, coeffs, height, kwargs in CASES:
        ref = run_case(kernel, coeffs, height, kwargs, "numpy")
        got = run_case(kernel, coeffs, height, kwargs, "numba")
        if ref != got:
            print(f"MISMATCH in {name}: numpy={ref} numba={got}")
            return 2
        t_np = timeit(kernel, coeffs, height, kwargs, "numpy", args.repeat)
        t_nb = timeit(kernel, coeffs, height, kwargs, "numba", args.repeat)
        rows.append({"case": name, "numpy_s": t_np, "numba_s": t_nb, "speedup": t_np / t_nb})
        print(f"{name:42s} {t_np * 1e3:11.2f} {t_nb * 1e3:11.2f} {t_np / t_nb:7.1f}x")

    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)
    return 0


if __name__ == "__main__":
    sys.exit(main())
