"""DPLL solver with two-watched-literal unit propagation.

Search is chronological: no clause learning, no restarts. Decisions follow a
fixed order (original variables lexicographically, then Tseitin gates in
creation order) and always try ``false`` first, so results are reproducible.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional, Union

from .formula import CnfInstance, Formula, Iff, Not, evaluate, to_cnf

DEFAULT_DECISION_CAP = 10**7


class ResourceLimitError(RuntimeError):
    pass


class SolverSoundnessError(AssertionError):
    """A returned model failed to satisfy the formula it was asked about."""


@dataclass
class SolverStats:
    decisions: int = 0
    propagations: int = 0
    conflicts: int = 0
    elapsed: float = 0.0
    calls: int = 0

    def as_dict(self) -> dict:
        return {
            "calls": self.calls,
            "decisions": self.decisions,
            "propagations": self.propagations,
            "conflicts": self.conflicts,
            "elapsed_ms": round(self.elapsed * 1000, 3),
        }


@dataclass(frozen=True)
class Sat:
    model: dict[str, bool]


@dataclass(frozen=True)
class Unsat:
    pass


@dataclass(frozen=True)
class Valid:
    pass


@dataclass(frozen=True)
class CounterModel:
    model: dict[str, bool]


SatResult = Union[Sat, Unsat]
ValidityResult = Union[Valid, CounterModel]


@dataclass
class _Solver:
    num_vars: int
    clauses: list[list[int]]
    order: list[int]
    cap: int
    stats: SolverStats
    value: list[int] = field(init=False)  # 1 true, -1 false, 0 unassigned; index = variable
    watches: dict[int, list[int]] = field(init=False)
    trail: list[int] = field(init=False)

    def __post_init__(self):
        self.value = [0] * (self.num_vars + 1)
        self.watches = {}
        self.trail = []

    def lit_value(self, lit: int) -> int:
        v = self.value[abs(lit)]
        return v if lit > 0 else -v

    def assign(self, lit: int) -> None:
        self.value[abs(lit)] = 1 if lit > 0 else -1
        self.trail.append(lit)

    def undo_to(self, size: int) -> None:
        trail, value = self.trail, self.value
        while len(trail) > size:
            value[abs(trail.pop())] = 0

    def propagate(self, head: int) -> Optional[int]:
        """Propagate trail entries from ``head``; return a conflicting clause index or None."""
        clauses, watches, value = self.clauses, self.watches, self.value
        trail = self.trail
        while head < len(trail):
            false_lit = -trail[head]
            head += 1
            watching = watches.get(false_lit)
            if not watching:
                continue
            keep = []
            conflict = None
            i = 0
            n = len(watching)
            while i < n:
                ci = watching[i]
                i += 1
                clause = clauses[ci]
                if clause[0] == false_lit:
                    clause[0], clause[1] = clause[1], clause[0]
                other = clause[0]
                ov = value[abs(other)]
                if (ov if other > 0 else -ov) == 1:
                    keep.append(ci)
                    continue
                for k in range(2, len(clause)):
                    lit = clause[k]
                    lv = value[abs(lit)]
                    if (lv if lit > 0 else -lv) != -1:
                        clause[1], clause[k] = lit, false_lit
                        watches.setdefault(lit, []).append(ci)
                        break
                else:
                    keep.append(ci)
                    if (ov if other > 0 else -ov) == -1:
                        conflict = ci
                        keep.extend(watching[i:])
                        break
                    self.stats.propagations += 1
                    self.assign(other)
            watches[false_lit] = keep
            if conflict is not None:
                return conflict
        return None

    def run(self, units: list[int]) -> Optional[list[int]]:
        for lit in units:
            v = self.lit_value(lit)
            if v == -1:
                return None
            if v == 0:
                self.assign(lit)
        for ci, clause in enumerate(self.clauses):
            self.watches.setdefault(clause[0], []).append(ci)
            self.watches.setdefault(clause[1], []).append(ci)

        # Each frame: (trail size before the decision, decision literal, flipped?)
        frames: list[tuple[int, int, bool]] = []
        order = self.order
        rank = {var: k for k, var in enumerate(order)}
        pos = 0
        head = 0
        while True:
            conflict = self.propagate(head)
            head = len(self.trail)
            if conflict is not None:
                self.stats.conflicts += 1
                while frames and frames[-1][2]:
                    frames.pop()
                if not frames:
                    return None
                size, lit, _ = frames.pop()
                self.undo_to(size)
                frames.append((size, -lit, True))
                self.assign(-lit)
                head = size
                pos = rank[abs(lit)]
                continue
            while pos < len(order) and self.value[order[pos]] != 0:
                pos += 1
            if pos == len(order):
                return self.value
            self.stats.decisions += 1
            if self.stats.decisions > self.cap:
                raise ResourceLimitError(f"decision cap of {self.cap} exceeded")
            var = order[pos]
            frames.append((len(self.trail), -var, False))
            self.assign(-var)


def solve(
    cnf: CnfInstance,
    decision_cap: int = DEFAULT_DECISION_CAP,
    stats: Optional[SolverStats] = None,
) -> SatResult:
    """Decide ``cnf``; a Sat model is total over ``cnf.original_vars``.

    Variables the search never needs to assign are set to false.
    """
    stats = stats if stats is not None else SolverStats()
    started = time.perf_counter()
    stats.calls += 1
    try:
        clauses = []
        units = []
        for clause in cnf.clauses:
            lits = list(dict.fromkeys(clause))
            if not lits:
                return Unsat()
            if any(-lit in lits for lit in lits):
                continue
            if len(lits) == 1:
                units.append(lits[0])
            else:
                clauses.append(lits)
        idx = cnf.index()
        order = [idx[name] for name in sorted(cnf.original_vars)]
        order += [k for k in range(1, cnf.num_vars + 1) if cnf.names[k - 1] in cnf.aux_vars]
        solver = _Solver(cnf.num_vars, clauses, order, decision_cap, stats)
        value = solver.run(units)
        if value is None:
            return Unsat()
        return Sat({name: value[idx[name]] == 1 for name in sorted(cnf.original_vars)})
    finally:
        stats.elapsed += time.perf_counter() - started


def is_satisfiable(
    f: Formula,
    decision_cap: int = DEFAULT_DECISION_CAP,
    stats: Optional[SolverStats] = None,
) -> SatResult:
    result = solve(to_cnf(f), decision_cap, stats)
    if isinstance(result, Sat) and not evaluate(f, result.model):
        raise SolverSoundnessError(f"model {result.model} does not satisfy the formula")
    return result


def is_valid(
    f: Formula,
    decision_cap: int = DEFAULT_DECISION_CAP,
    stats: Optional[SolverStats] = None,
) -> ValidityResult:
    """Valid, or a model over ``vars(f)`` under which ``f`` is false."""
    result = is_satisfiable(Not(f), decision_cap, stats)
    if isinstance(result, Unsat):
        return Valid()
    return CounterModel(result.model)


def models_equivalent(f: Formula, g: Formula, **kw) -> bool:
    return isinstance(is_valid(Iff(f, g), **kw), Valid)

