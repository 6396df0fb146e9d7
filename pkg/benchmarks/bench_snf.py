"""Benchmark the compiled Smith-reduction kernel against the pure one.

Two workloads:

* difference-constraint matrices, the shape the solvers actually reduce:
  sparse, entries in {-1, 0, 1}, sizes up to 81x81.  The checked int64
  kernel handles all of them.
* dense random matrices, where transform-matrix entries can explode past
  int64 (they genuinely reach 10^40+ at 10x10); the wrapper then falls
  back to the arbitrary-precision pure kernel.  The overflow column shows
  how often that happens.

Both kernels are verified to agree on every matrix timed.

    python3 benchmarks/bench_snf.py [--trials N] [--seed S]
"""

import argparse
import itertools
import random
import statistics
import time


def constraint_matrix(n: int, rank: int):
    """Stacked difference constraints for the axes-plus-diagonal system."""
    from pdce import abelian as ab
    from pdce.funcspace import diff_tuple_matrix
    from pdce.groups import FiniteGroup

    g = FiniteGroup([n] * rank)
    subs = [
        g.subgroup([[1 if j == i else 0 for j in range(rank)]]) for i in range(rank)
    ]
    subs.append(g.subgroup([[1] * rank]))
    blocks = [
        diff_tuple_matrix(g, tup)
        for tup in itertools.product(*[s.canonical_gens for s in subs])
    ]
    m = ab.vstack(blocks)
    return [[int(x) for x in row] for row in m]


def median_time(fn, mats, trials: int) -> float:
    times = []
    for _ in range(trials):
        t0 = time.perf_counter()
        for m in mats:
            fn(m, True, True, False, False)
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--trials", type=int, default=5)
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args()

    from pdce import _snf_py
    from pdce._kernels import COMPILED_AVAILABLE

    if not COMPILED_AVAILABLE:
        raise SystemExit(
            "compiled kernel not importable (built without the extension, "
            "or PDCE_PURE is set) - nothing to compare"
        )
    from pdce import _snf_c

    def check_agreement(mats):
        for m in mats:
            got = _snf_c.smith_reduce_i64(m, False, False, False, False)[0]
            want = _snf_py.smith_reduce(m, False, False, False, False)[0]
            if got != want:
                raise SystemExit("kernel disagreement")

    print("difference-constraint matrices (with transforms):")
    print(f"{'system':>12} {'size':>8} {'compiled':>12} {'pure':>12} {'speedup':>8}")
    for n, rank in ((4, 2), (6, 2), (3, 3), (8, 2), (9, 2)):
        m = constraint_matrix(n, rank)
        check_agreement([m])
        fast = median_time(_snf_c.smith_reduce_i64, [m], args.trials)
        slow = median_time(_snf_py.smith_reduce, [m], args.trials)
        print(
            f"{f'(Z/{n})^{rank}':>12} {f'{len(m)}x{len(m[0])}':>8} "
            f"{fast * 1e3:>10.2f}ms {slow * 1e3:>10.2f}ms {slow / fast:>7.1f}x"
        )

    rng = random.Random(args.seed)
    print("\ndense random matrices, entries in [-9, 9] (with transforms):")
    print(
        f"{'size':>12} {'batch':>8} {'compiled':>12} {'pure':>12} {'speedup':>8} "
        f"{'overflow':>9}"
    )
    for size, count in ((4, 50), (5, 50), (6, 30), (8, 20), (10, 10)):
        kept, overflowed = [], 0
        for _ in range(count):
            m = [[rng.randint(-9, 9) for _ in range(size)] for _ in range(size)]
            try:
                _snf_c.smith_reduce_i64(m, True, True, False, False)
                kept.append(m)
            except OverflowError:
                overflowed += 1
        if not kept:
            print(f"{f'{size}x{size}':>12} {count:>8} {'-':>12} {'-':>12} {'-':>8} "
                  f"{overflowed:>4}/{count:<4}")
            continue
        check_agreement(kept)
        fast = median_time(_snf_c.smith_reduce_i64, kept, args.trials)
        slow = median_time(_snf_py.smith_reduce, kept, args.trials)
        print(
            f"{f'{size}x{size}':>12} {count:>8} {fast * 1e3:>10.2f}ms "
            f"{slow * 1e3:>10.2f}ms {slow / fast:>7.1f}x {overflowed:>4}/{count:<4}"
        )


if __name__ == "__main__":
    main()
