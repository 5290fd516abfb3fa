"""Time the compiled RK4 kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--spacing 0.001] [--ks 64] [--repeat 3] [--full]

Both backends are fed the same potential table (lambda=4, mu=1) so the
timings and the max difference refer to identical work.
"""
import argparse
import sys
import time

import numpy as np

from zeromodes import _kernels_py, numeric
from zeromodes.model import PotentialParams

try:
    from zeromodes import _kernels
except ImportError:
    _kernels = None


def best_of(repeat, fn, *args):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--spacing", type=float, default=0.001)
    ap.add_argument("--ks", type=int, default=64, help="number of ky values per matching call")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--full", action="store_true",
                    help="also time one complete shoot_spectrum per backend")
    args = ap.parse_args(argv)

    if _kernels is None:
        print("compiled extension not built; nothing to compare", file=sys.stderr)
        return 1

    p = PotentialParams(4.0, 1.0)
    grid = numeric.Grid.from_spacing(-25.0, 25.0, args.spacing)
    shooter = numeric._Shooter(p, grid)
    ks = np.linspace(abs(p.mu) + 0.01, abs(p.lam) + abs(p.mu) + 1.0, args.ks)
    call = (shooter.v_half, grid.spacing, shooter.i_match, -p.mu, p.mu)

    print(f"grid: {grid.n_points} nodes, h={grid.spacing:g}; {args.ks} ky values, best of {args.repeat}")
    t_c, f_c = best_of(args.repeat, _kernels.matching_function, ks, *call)
    t_py, f_py = best_of(args.repeat, _kernels_py.matching_function, ks, *call)
    print(f"matching_function  cython {t_c:9.4f} s   numpy {t_py:9.4f} s   "
          f"speedup {t_py / t_c:6.1f}x   max diff {np.max(np.abs(f_c - f_py)):.1e}")

    k = float(ks[len(ks) // 2])
    t_c, _ = best_of(args.repeat, _kernels.integrate_path, k, *call)
    t_py, _ = best_of(1, _kernels_py.integrate_path, k, *call)
    print(f"integrate_path     cython {t_c:9.4f} s   numpy {t_py:9.4f} s   speedup {t_py / t_c:6.1f}x")

    if args.full:
        from zeromodes import kernels

        for name, mod in (("cython", _kernels), ("numpy", _kernels_py)):
            kernels.matching_function = mod.matching_function
            kernels.integrate_path = mod.integrate_path
            t0 = time.perf_counter()
            roots = numeric.shoot_spectrum(p, abs(p.lam) + abs(p.mu) + 1.0, grid)
            print(f"shoot_spectrum     {name:6s} {time.perf_counter() - t0:9.4f} s   "
                  f"roots {[round(r.ky, 10) for r in roots]}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
