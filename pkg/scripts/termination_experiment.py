"""Iteration counts on a random spec corpus, against the 2^N bound."""

import argparse
import collections
import time

from propweaken import oracle
from propweaken.corpus import spec_corpus
from propweaken.weaken import WeakenConfig, Weakened, weaken


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--count", type=int, default=500)
    ap.add_argument("--keep-hidden", action="store_true")
    ap.add_argument("--generalize-cex", action="store_true")
    args = ap.parse_args()

    cfg = WeakenConfig(keep_hidden=args.keep_hidden, generalize_cex=args.generalize_cex)
    outcomes = collections.Counter()
    ratios = []
    worst = 0
    mismatches = 0
    started = time.perf_counter()
    for spec in spec_corpus(args.seed, args.count):
        out = weaken(spec, cfg)
        outcomes[type(out).__name__] += 1
        if not isinstance(out, Weakened):
            continue
        n = len(out.trace)
        bound = cfg.iteration_bound(spec)
        worst = max(worst, n)
        ratios.append(n / bound)
        if not cfg.keep_hidden and not cfg.generalize_cex:
            expected = oracle.semantic_weakening(spec)
            mismatches += oracle.table_of(out.final, expected.order) != expected
    elapsed = time.perf_counter() - started

    for name, k in sorted(outcomes.items()):
        print(f"{name:18} {k}")
    if ratios:
        print(f"max iterations     {worst}")
        print(f"mean iters/bound   {sum(ratios) / len(ratios):.3f}")
        print(f"max iters/bound    {max(ratios):.3f}")
    print(f"fixpoint mismatch  {mismatches}")
    print(f"elapsed            {elapsed:.2f}s")


if __name__ == "__main__":
    main()
