"""Compare exact and greedy DNF sizes on random formulas."""

import argparse
import random
import statistics
import time

from propweaken.corpus import random_formula
from propweaken.formula import variables
from propweaken.simplify import greedy_dnf, literal_count, minimal_dnf


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--count", type=int, default=200)
    ap.add_argument("--max-vars", type=int, default=8)
    ap.add_argument("--depth", type=int, default=6)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    names = [f"x{i}" for i in range(args.max_vars)]
    gaps = []
    t_exact = t_greedy = 0.0
    for _ in range(args.count):
        f = random_formula(rng, names, args.depth)
        order = sorted(variables(f))
        t0 = time.perf_counter()
        exact = literal_count(minimal_dnf(f, order))
        t1 = time.perf_counter()
        greedy = literal_count(greedy_dnf(f, order))
        t2 = time.perf_counter()
        t_exact += t1 - t0
        t_greedy += t2 - t1
        gaps.append(greedy - exact)

    print(f"formulas        {args.count}")
    print(f"greedy optimal  {sum(g == 0 for g in gaps)}")
    print(f"mean extra lits {statistics.mean(gaps):.2f}")
    print(f"max extra lits  {max(gaps)}")
    print(f"exact time      {t_exact:.2f}s")
    print(f"greedy time     {t_greedy:.2f}s")


if __name__ == "__main__":
    main()
