"""``weaken`` command line: check, run, oracle-check, export-dimacs."""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import asdict, dataclass, field
from typing import Optional

from . import oracle
from .formula import Not, TooManyVariablesError, to_cnf
from .parser import ParseError, format_literals, load_spec, pretty_print
from .sat import DEFAULT_DECISION_CAP, ResourceLimitError, SolverStats
from .weaken import (
    Candidate,
    CriticalViolated,
    DesiredHolds,
    IterationLimit,
    NotWellFormed,
    Outcome,
    Proceed,
    ResourceLimit,
    Spec,
    Weakened,
    WeakenConfig,
    build_F,
    check_well_formed,
    precheck,
    weaken,
)

EXIT_OK = 0
EXIT_CRITICAL = 1
EXIT_NOT_WELL_FORMED = 2
EXIT_PARSE = 3
EXIT_LIMIT = 4
EXIT_DISAGREE = 5

OUTCOME_NAMES = {
    NotWellFormed: "not_well_formed",
    DesiredHolds: "desired_holds",
    CriticalViolated: "critical_violated",
    Weakened: "weakened",
    IterationLimit: "iteration_limit",
    ResourceLimit: "resource_limit",
}


def exit_code(outcome: Outcome) -> int:
    return outcome.code


@dataclass
class RunReport:
    outcome: str
    final: Optional[str]
    final_simplified: Optional[str]
    iterations: list[dict] = field(default_factory=list)
    stats: dict = field(default_factory=dict)
    elapsed_ms: float = 0.0
    counterexample: Optional[dict] = None
    simplify_method: Optional[str] = None
    warnings: list[str] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        return cls(**json.loads(text))


def _model_dict(m) -> dict:
    return {k: bool(m[k]) for k in sorted(m)}


def build_report(outcome: Outcome, stats: SolverStats, elapsed: float) -> RunReport:
    report = RunReport(OUTCOME_NAMES[type(outcome)], None, None, stats=stats.as_dict(), elapsed_ms=round(elapsed * 1000, 3))
    trace = getattr(outcome, "trace", ())
    report.iterations = [
        {
            "index": rec.index,
            "counterexample": _model_dict(rec.counter_model),
            "cube": rec.projected_cube.as_dict(),
            "candidate": pretty_print(rec.next_candidate),
        }
        for rec in trace
    ]
    if isinstance(outcome, Weakened):
        report.final = pretty_print(outcome.final)
        report.final_simplified = pretty_print(outcome.simplified)
        report.simplify_method = outcome.simplify_method
    elif isinstance(outcome, DesiredHolds):
        report.final = report.final_simplified = pretty_print(outcome.desired)
        if outcome.assumption_unsat:
            report.warnings.append("assumption is unsatisfiable")
    elif isinstance(outcome, (CriticalViolated, NotWellFormed)):
        report.counterexample = _model_dict(outcome.counter_model)
    elif isinstance(outcome, ResourceLimit):
        report.warnings.append(outcome.message)
    return report


def _err(msg: str) -> None:
    print(msg, file=sys.stderr)


def _load(path: str) -> Spec:
    try:
        return load_spec(path)
    except OSError as exc:
        raise ParseError("Lex", f"cannot read file: {exc.strerror}", 1, 1, path) from None


def _decision_cap() -> int:
    raw = os.environ.get("WEAKEN_DECISION_CAP")
    return int(raw) if raw else DEFAULT_DECISION_CAP


def _format_model(m) -> str:
    return " ".join(f"{k}={int(bool(m[k]))}" for k in sorted(m))


def cmd_check(args) -> int:
    spec = _load(args.spec)
    cfg = WeakenConfig(decision_cap=_decision_cap())
    if not check_well_formed(spec, cfg):
        print("not well-formed: desired does not imply critical")
        return EXIT_NOT_WELL_FORMED
    pre = precheck(spec, cfg)
    if isinstance(pre, DesiredHolds):
        if pre.assumption_unsat:
            _err("warning: assumption is unsatisfiable")
        print("well-formed; desired holds")
        return EXIT_OK
    if isinstance(pre, CriticalViolated):
        print("well-formed; desired does not hold; critical violated")
        print(f"counterexample: {_format_model(pre.counter_model)}")
        return EXIT_CRITICAL
    assert isinstance(pre, Proceed)
    print("well-formed; desired does not hold; critical holds; weakening required")
    return EXIT_OK


def _print_trace(outcome: Outcome) -> None:
    for rec in getattr(outcome, "trace", ()):
        print(f"iteration {rec.index}")
        print(f"  counterexample: {_format_model(rec.counter_model)}")
        print(f"  cube: {format_literals(rec.projected_cube.literals)}")
        print(f"  candidate: {pretty_print(rec.next_candidate)}")
    if isinstance(outcome, Weakened):
        print(f"raw: {pretty_print(outcome.final)}")


def cmd_run(args) -> int:
    spec = _load(args.spec)
    cfg = WeakenConfig(
        keep_hidden=args.keep_hidden,
        generalize_cex=args.generalize_cex,
        max_iterations=args.max_iters,
        simplify=not args.no_simplify,
        sugar=args.sugar,
        decision_cap=_decision_cap(),
    )
    stats = SolverStats()
    started = time.perf_counter()
    outcome = weaken(spec, cfg, stats)
    report = build_report(outcome, stats, time.perf_counter() - started)
    for w in report.warnings:
        _err(f"warning: {w}")

    if args.json:
        print(report.to_json())
        return exit_code(outcome)
    if args.trace:
        _print_trace(outcome)
    if isinstance(outcome, Weakened):
        print(pretty_print(outcome.simplified))
    elif isinstance(outcome, DesiredHolds):
        print(f"desired holds: {pretty_print(outcome.desired)}")
    elif isinstance(outcome, CriticalViolated):
        print("critical property violated")
        print(f"counterexample: {_format_model(outcome.counter_model)}")
    elif isinstance(outcome, NotWellFormed):
        _err("not well-formed: desired does not imply critical")
    elif isinstance(outcome, IterationLimit):
        _err(f"iteration limit of {outcome.limit} reached")
    else:
        _err(f"resource limit: {outcome.message}")
    return exit_code(outcome)


def cmd_oracle_check(args) -> int:
    spec = _load(args.spec)
    n = len(spec.visible | spec.hidden)
    if n > oracle.MAX_VARS:
        _err(f"{n} variables exceed the oracle limit of {oracle.MAX_VARS}")
        return EXIT_LIMIT
    outcome = weaken(spec, WeakenConfig(decision_cap=_decision_cap()))
    if isinstance(outcome, Weakened):
        produced = [outcome.final, outcome.simplified]
    elif isinstance(outcome, DesiredHolds):
        produced = [outcome.desired]
    else:
        print(f"NOT APPLICABLE: outcome is {OUTCOME_NAMES[type(outcome)]}")
        return exit_code(outcome)
    try:
        expected = oracle.semantic_weakening(spec)
        order = expected.order
        agree = all(oracle.table_of(f, order) == expected for f in produced)
    except TooManyVariablesError as exc:
        _err(str(exc))
        return EXIT_LIMIT
    print("AGREE" if agree else "DISAGREE")
    return EXIT_OK if agree else EXIT_DISAGREE


def cmd_export_dimacs(args) -> int:
    spec = _load(args.spec)
    f0 = build_F(spec, Candidate(0, spec.desired))
    target = {"F0": f0, "negF0": Not(f0), "assumption": spec.assumption}[args.which]
    sys.stdout.write(to_cnf(target).to_dimacs())
    return EXIT_OK


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="weaken", description="Counterexample-guided weakening of propositional properties.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="well-formedness and precheck only")
    c.add_argument("spec")
    c.set_defaults(func=cmd_check)

    r = sub.add_parser("run", help="run the weakening loop")
    r.add_argument("spec")
    r.add_argument("--json", action="store_true", help="emit a JSON report")
    r.add_argument("--trace", action="store_true", help="print every iteration")
    r.add_argument("--keep-hidden", action="store_true", help="keep hidden variables in cubes")
    r.add_argument("--generalize-cex", action="store_true", help="drop cube literals while sound")
    r.add_argument("--no-simplify", action="store_true", help="print the raw fixpoint")
    r.add_argument("--sugar", dest="sugar", action="store_true", default=True, help="rewrite DNF as an implication (default)")
    r.add_argument("--no-sugar", dest="sugar", action="store_false", help="print the minimal DNF as is")
    r.add_argument("--max-iters", type=_positive_int, default=None, metavar="N", help="cap on integrated cubes (default 2^N)")
    r.set_defaults(func=cmd_run)

    o = sub.add_parser("oracle-check", help="compare the loop against brute force")
    o.add_argument("spec")
    o.set_defaults(func=cmd_oracle_check)

    d = sub.add_parser("export-dimacs", help="write a CNF encoding in DIMACS format")
    d.add_argument("spec")
    d.add_argument("--which", choices=["F0", "negF0", "assumption"], default="negF0")
    d.set_defaults(func=cmd_export_dimacs)
    return p


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        _err(str(exc))
        return EXIT_PARSE
    except ResourceLimitError as exc:
        _err(f"resource limit: {exc}")
        return EXIT_LIMIT


if __name__ == "__main__":
    sys.exit(main())
