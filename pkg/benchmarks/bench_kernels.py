"""Compare the compiled and pure-Python polynomial kernels.

Evaluates the Witt addition and multiplication polynomials on random batches
of points for a few rings and prints throughput for each backend.  Run from
the repository root after building the extension:

    python3 benchmarks/bench_kernels.py [--points 20000] [--repeat 3]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from tdk import polys
from tdk.kernels import compile_polys
from tdk.rings import fp_poly_quot, zmod

CASES = [
    ("F2", lambda: zmod(2), 2, 4),
    ("Z/4", lambda: zmod(2, 2), 2, 3),
    ("F3", lambda: zmod(3), 3, 3),
    ("F2[e]/(e^2)", lambda: fp_poly_quot(2, ["e"], ["e^2"]), 2, 3),
]


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    try:
        from tdk import _ckernels  # noqa: F401
        backends = ["python", "cython"]
    except ImportError:
        print("compiled kernel not built; timing the Python backend only")
        backends = ["python"]
    rng = np.random.default_rng(0)
    print(f"{'ring':<12} {'n':>2} {'op':<4} " + " ".join(f"{b + ' [pts/s]':>18}" for b in backends) + "  speedup")
    for name, make, p, n in CASES:
        R = make()
        pts = rng.integers(0, R.size, size=(args.points, 2 * n)).astype(np.int32)
        for op, fn in (("add", polys.sum_polys), ("mul", polys.prod_polys)):
            rates, outs = [], []
            for backend in backends:
                prog = compile_polys(fn(p, n, R.t), 2 * n, R, backend=backend)
                outs.append(prog.eval_many(pts))
                rates.append(args.points / best_of(lambda: prog.eval_many(pts), args.repeat))
            assert all(np.array_equal(outs[0], o) for o in outs[1:]), "backends disagree"
            speed = f"{rates[-1] / rates[0]:7.1f}x" if len(rates) > 1 else ""
            print(f"{name:<12} {n:>2} {op:<4} " + " ".join(f"{r:18.0f}" for r in rates) + "  " + speed)


if __name__ == "__main__":
    main()
