"""Run the drone example and print each step of the loop."""

import argparse
from pathlib import Path

from propweaken import oracle
from propweaken.parser import format_literals, load_spec, pretty_print
from propweaken.weaken import WeakenConfig, Weakened, weaken

DEFAULT = Path(__file__).resolve().parent.parent / "specs" / "drone.wspec"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("spec", nargs="?", default=str(DEFAULT))
    ap.add_argument("--keep-hidden", action="store_true")
    args = ap.parse_args()

    spec = load_spec(args.spec)
    print("visible:", " ".join(sorted(spec.visible)))
    print("hidden: ", " ".join(sorted(spec.hidden)) or "-")
    out = weaken(spec, WeakenConfig(keep_hidden=args.keep_hidden))
    print("outcome:", type(out).__name__)
    if not isinstance(out, Weakened):
        return
    for rec in out.trace:
        print(f"[{rec.index}] cube {format_literals(rec.projected_cube.literals)}")
    print("final:     ", pretty_print(out.final))
    print("simplified:", pretty_print(out.simplified), f"({out.simplify_method})")
    if not args.keep_hidden:
        expected = oracle.semantic_weakening(spec)
        got = oracle.table_of(out.final, expected.order)
        print("oracle:    ", "agree" if got == expected else "DISAGREE")


if __name__ == "__main__":
    main()
