"""Compare the compiled and numpy mod-p elimination kernels.

Usage: python3 benchmarks/bench_rank.py [--sizes 200 400 800] [--repeat 3]

Each case is a random integer matrix of half rank; both kernels must agree
on the rank, and the table reports the best wall time of ``--repeat`` runs.
A second block times a full Euler class computation end to end.
"""

import argparse
import time

import numpy as np

from keuler.linalg import modular


def low_rank(n, rng):
    r = n // 2
    A = rng.integers(-3, 4, size=(n, r))
    B = rng.integers(-3, 4, size=(r, n))
    return (A @ B).astype(np.int64)


def time_kernel(name, M, p, repeat):
    modular.set_backend(name)
    best, rk = float("inf"), None
    for _ in range(repeat):
        a = np.ascontiguousarray(M % p)
        t = time.perf_counter()
        rk = len(modular.echelon_mod_p(a, p))
        best = min(best, time.perf_counter() - t)
    return best, rk


def time_ke(name, builder, repeat):
    from keuler.core.euler import ke_class

    modular.set_backend(name)
    best, vr = float("inf"), None
    for _ in range(repeat):
        t = time.perf_counter()
        vr = ke_class(builder()).virtual_rank
        best = min(best, time.perf_counter() - t)
    return best, vr


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[200, 400, 800])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    try:
        modular.set_backend("cython")
    except ImportError:
        print("compiled kernel not built; only the numpy kernel is available")
        return 1
    rng = np.random.default_rng(args.seed)
    p = modular.prime(0)
    print(f"mod-p row reduction, p = {p}")
    print(f"{'n':>6} {'rank':>6} {'cython s':>10} {'numpy s':>10} {'speedup':>8}")
    for n in args.sizes:
        M = low_rank(n, rng)
        tc, rc = time_kernel("cython", M, p, args.repeat)
        tn, rn = time_kernel("numpy", M, p, args.repeat)
        if rc != rn:
            raise SystemExit(f"kernels disagree at n={n}: {rc} vs {rn}")
        print(f"{n:>6} {rc:>6} {tc:>10.4f} {tn:>10.4f} {tn / tc:>8.1f}")

    from keuler.core.homotopy import stabilize
    from keuler.scenarios import bundle_case_instance, genus_one_instance

    cases = (
        ("bundle 2,2,4", lambda: bundle_case_instance(2, 2, 4)),
        ("g1 r=4 s=2", lambda: stabilize(genus_one_instance(4), 2).instance),
    )

    print("\nEuler class end to end")
    print(f"{'case':>14} {'c_W':>5} {'cython s':>10} {'numpy s':>10}")
    for label, builder in cases:
        tc, vc = time_ke("cython", builder, 1)
        tn, vn = time_ke("numpy", builder, 1)
        if vc != vn:
            raise SystemExit(f"kernels disagree on {label}")
        print(f"{label:>14} {vc:>5} {tc:>10.3f} {tn:>10.3f}")
    modular.set_backend("cython")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
