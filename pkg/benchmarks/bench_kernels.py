"""Time the compiled kernels against the pure-Python ones.

    python3 benchmarks/bench_kernels.py [--repeat N] [--spaces rp2*rp2,rp(4)*circle]

Both backends are run on the same inputs and their outputs are compared
before any timing is reported.
"""

import argparse
import random
import sys
import time

from diffcoh import _kernels_py
from diffcoh.io import space
from diffcoh.steenrod import interval_table

try:
    from diffcoh import _kernels
except ImportError:
    _kernels = None


def level_inputs(X):
    out = []
    for n in range(X.dim):
        rows = {}
        for r, c, v in X.coboundary(n).entries:
            rows.setdefault(r, {})[c] = v
        out.append((rows,))
    return out


def cup_inputs(X, rng):
    out = []
    for p in range(1, X.dim):
        for q in range(1, X.dim - p + 1):
            for i in range(p + 1):
                n = p + q - i
                if n > X.dim or n < 0:
                    continue
                table = interval_table(p, q, i)
                u = [rng.randint(0, 1) for _ in range(X.count(p))]
                v = [rng.randint(0, 1) for _ in range(X.count(q))]
                out.append((table, X.simplices(n), (X.index(p), X.index(q)), u, v, 2))
    return out


def best_of(fn, inputs, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        for args in inputs:
            fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--spaces", default="rp2*rp2,rp(4)*circle,sphere(2)*sphere(2)")
    args = ap.parse_args(argv)
    if _kernels is None:
        print("compiled kernels not built; run `python3 setup.py build_ext --inplace`", file=sys.stderr)
        return 1
    rng = random.Random(0)
    print(f"{'space':<24}{'kernel':<16}{'python s':>10}{'compiled s':>12}{'speedup':>9}")
    for name in args.spaces.split(","):
        X = space(name)
        for kernel, inputs in (("reduce_level", level_inputs(X)), ("cup_table_eval", cup_inputs(X, rng))):
            py = getattr(_kernels_py, kernel)
            cc = getattr(_kernels, kernel)
            if any(py(*a) != cc(*a) for a in inputs):
                print(f"MISMATCH {name} {kernel}", file=sys.stderr)
                return 1
            tp = best_of(py, inputs, args.repeat)
            tc = best_of(cc, inputs, args.repeat)
            print(f"{name:<24}{kernel:<16}{tp:>10.4f}{tc:>12.4f}{tp / tc if tc else float('inf'):>8.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
