"""Compare the compiled and numpy kernel backends.

    python3 benchmarks/bench_kernels.py --sizes 12 16 20 --repeat 5
"""

import argparse
import timeit

import numpy as np

from polygame import kernels
from polygame.families import rescue_function
from polygame.setfunc import inverse_weight_sums


def cases(n, rng):
    table = np.ascontiguousarray(rescue_function(rng.uniform(0.05, 0.95, n)).table())
    w = np.exp(rng.normal(size=n))
    den = inverse_weight_sums(w)
    zp = rng.uniform(0.5, 1.5, n) / w
    x = rng.normal(size=n)
    return {
        "subset_sums": lambda k: k.subset_sums(x),
        "ratio_extremize": lambda k: k.ratio_extremize(table, den, False, 1e-9),
        "pairwise_violation": lambda k: k.pairwise_violation(table, n, True, 1e-9),
        "monotone_violation": lambda k: k.monotone_violation(table, n, 1e-9),
        "zeta_violation": lambda k: k.zeta_violation(table, n, zp, False, 1e-9),
    }


def best_time(fn, backend, repeat):
    timer = timeit.Timer(lambda: fn(backend))
    loops, _ = timer.autorange()
    return min(timer.repeat(repeat, loops)) / loops


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[10, 14, 18])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    compiled = kernels.compiled_backend
    if compiled is None:
        print("compiled extension not built; only the numpy backend is available")
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':<20}{'n':>4}{'python (s)':>14}{'cython (s)':>14}{'speedup':>10}")
    for n in args.sizes:
        for name, fn in cases(n, rng).items():
            t_py = best_time(fn, kernels.python_backend, args.repeat)
            if compiled is None:
                print(f"{name:<20}{n:>4}{t_py:>14.3e}{'-':>14}{'-':>10}")
                continue
            t_cy = best_time(fn, compiled, args.repeat)
            print(f"{name:<20}{n:>4}{t_py:>14.3e}{t_cy:>14.3e}{t_py / t_cy:>9.1f}x")


if __name__ == "__main__":
    main()
