"""Time the compiled and pure-Python closure kernels, and closing E versus closing M.

    python3 benchmarks/bench_closure.py --sizes 6 8 10 12 --models 10
"""
from __future__ import annotations

import argparse
import random
import statistics
import time

from elemci.closure import HAVE_COMPILED, close_set, close_triplets_oracle, expand_e
from elemci.core import AxiomLevel, Triplet


def random_triplets(n, count, rng):
    out = []
    for _ in range(count):
        roles = [rng.randrange(4) for _ in range(n)]
        I = sum(1 << k for k, r in enumerate(roles) if r == 1)
        J = sum(1 << k for k, r in enumerate(roles) if r == 2)
        K = sum(1 << k for k, r in enumerate(roles) if r == 3)
        if I and J:
            out.append(Triplet(I, J, K))
    return out


def timed(fn, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def bench_kernels(sizes, models, seeds, repeat, rng):
    print("kernel comparison (closing e(M); best of", repeat, "runs, median over models)")
    print(f"{'n':>3} {'level':>14} {'triplets':>9} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for n in sizes:
        for level in AxiomLevel:
            rows = []
            for _ in range(models):
                elems = expand_e(random_triplets(n, seeds, rng))
                tp, a = timed(lambda: close_set(elems, level, n_vars=n, backend="python"), repeat)
                if HAVE_COMPILED:
                    tc, b = timed(lambda: close_set(elems, level, n_vars=n, backend="cython"), repeat)
                    assert a == b, "kernels disagree"
                else:
                    tc = float("nan")
                rows.append((len(a), tp, tc))
            size = statistics.median(r[0] for r in rows)
            tp = statistics.median(r[1] for r in rows)
            tc = statistics.median(r[2] for r in rows)
            print(f"{n:>3} {level.label:>14} {size:>9.0f} {tp:>10.5f} {tc:>10.5f} {tp / tc:>8.1f}")


def bench_e_vs_m(n, models, seeds, rng):
    print(f"\nclosing E (elementary, fastest kernel) versus closing M (triplet oracle), n={n}")
    print(f"{'level':>14} {'E s':>10} {'M s':>10} {'ratio':>8}")
    for level in AxiomLevel:
        te, tm = [], []
        for _ in range(models):
            M = random_triplets(n, seeds, rng)
            t0 = time.perf_counter()
            close_set(expand_e(M), level, n_vars=n)
            te.append(time.perf_counter() - t0)
            t0 = time.perf_counter()
            close_triplets_oracle(M, level)
            tm.append(time.perf_counter() - t0)
        a, b = statistics.median(te), statistics.median(tm)
        print(f"{level.label:>14} {a:>10.5f} {b:>10.5f} {b / a:>8.1f}")


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=[6, 8, 10])
    p.add_argument("--models", type=int, default=10)
    p.add_argument("--seeds", type=int, default=3, help="seed triplets per model")
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--oracle-n", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)
    rng = random.Random(args.seed)
    if not HAVE_COMPILED:
        print("compiled kernel not built; only the Python kernel is timed")
    bench_kernels(args.sizes, args.models, args.seeds, args.repeat, rng)
    bench_e_vs_m(args.oracle_n, args.models, args.seeds, rng)


if __name__ == "__main__":
    main()
