"""Counterexample-guided weakening of a desired property.

Given a system description ``A``, a desired property ``P_D`` and a critical
property ``P_C`` with ``P_D -> P_C``, the loop starts from ``P_D`` and keeps
disjoining the visible part of a counterexample to ``A -> candidate`` until
the candidate is entailed by ``A``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional, Union

from .formula import (
    And,
    Cube,
    Formula,
    Implies,
    Not,
    Or,
    TooManyVariablesError,
    cube_of_model,
    cube_to_formula,
    evaluate,
    variables,
)
from .sat import (
    DEFAULT_DECISION_CAP,
    CounterModel,
    ResourceLimitError,
    SolverStats,
    Unsat,
    Valid,
    is_satisfiable,
    is_valid,
)

log = logging.getLogger(__name__)

ITERATION_HARD_CAP = 1 << 20


@dataclass(frozen=True)
class Spec:
    assumption: Formula
    desired: Formula
    critical: Formula

    @property
    def visible(self) -> frozenset[str]:
        return variables(self.desired) | variables(self.critical)

    @property
    def hidden(self) -> frozenset[str]:
        return variables(self.assumption) - self.visible

    @property
    def all_vars(self) -> frozenset[str]:
        return self.visible | self.hidden


@dataclass(frozen=True)
class Candidate:
    index: int
    formula: Formula


@dataclass(frozen=True)
class IterationRecord:
    index: int
    counter_model: dict[str, bool]
    projected_cube: Cube
    next_candidate: Formula


@dataclass
class WeakenConfig:
    keep_hidden: bool = False
    generalize_cex: bool = False
    # None means the 2^N bound, N = number of cube variables, capped at 2^20
    max_iterations: Optional[int] = None
    simplify: bool = True
    sugar: bool = True
    decision_cap: int = DEFAULT_DECISION_CAP

    def __post_init__(self):
        if self.max_iterations is not None and self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")

    def iteration_bound(self, spec: Spec) -> int:
        if self.max_iterations is not None:
            return self.max_iterations
        n = len(spec.visible) + (len(spec.hidden) if self.keep_hidden else 0)
        return min(1 << n, ITERATION_HARD_CAP)


# --- outcomes ------------------------------------------------------------------


@dataclass(frozen=True)
class NotWellFormed:
    counter_model: dict[str, bool]
    code = 2


@dataclass(frozen=True)
class DesiredHolds:
    desired: Formula
    assumption_unsat: bool = False
    code = 0


@dataclass(frozen=True)
class CriticalViolated:
    counter_model: dict[str, bool]
    code = 1


@dataclass(frozen=True)
class Weakened:
    final: Formula
    simplified: Formula
    trace: tuple[IterationRecord, ...]
    simplify_method: str = "none"
    code = 0


@dataclass(frozen=True)
class IterationLimit:
    trace: tuple[IterationRecord, ...]
    limit: int
    code = 4


@dataclass(frozen=True)
class ResourceLimit:
    trace: tuple[IterationRecord, ...]
    message: str
    code = 4


Outcome = Union[NotWellFormed, DesiredHolds, CriticalViolated, Weakened, IterationLimit, ResourceLimit]


@dataclass(frozen=True)
class Proceed:
    pass


# --- steps -------------------------------------------------------------------


@dataclass
class _Ctx:
    cfg: WeakenConfig = field(default_factory=WeakenConfig)
    stats: SolverStats = field(default_factory=SolverStats)

    def valid(self, f: Formula):
        return is_valid(f, self.cfg.decision_cap, self.stats)

    def unsat(self, f: Formula) -> bool:
        return isinstance(is_satisfiable(f, self.cfg.decision_cap, self.stats), Unsat)


def _well_formed_check(s: Spec, ctx: _Ctx):
    return ctx.valid(Implies(s.desired, s.critical))


def check_well_formed(s: Spec, cfg: Optional[WeakenConfig] = None, stats: Optional[SolverStats] = None) -> bool:
    ctx = _Ctx(cfg or WeakenConfig(), stats or SolverStats())
    return isinstance(_well_formed_check(s, ctx), Valid)


def _precheck(s: Spec, ctx: _Ctx):
    if isinstance(ctx.valid(Implies(s.assumption, s.desired)), Valid):
        return DesiredHolds(s.desired, assumption_unsat=ctx.unsat(s.assumption))
    result = ctx.valid(Implies(s.assumption, s.critical))
    if isinstance(result, CounterModel):
        return CriticalViolated(result.model)
    return Proceed()


def precheck(s: Spec, cfg: Optional[WeakenConfig] = None, stats: Optional[SolverStats] = None):
    """DesiredHolds, CriticalViolated(model) or Proceed."""
    return _precheck(s, _Ctx(cfg or WeakenConfig(), stats or SolverStats()))


def build_F(s: Spec, c: Candidate) -> Formula:
    p = c.formula
    return And(And(Implies(s.assumption, p), Implies(s.desired, p)), Implies(p, s.critical))


def _generalize(cube: Cube, candidate: Formula, critical: Formula, ctx: _Ctx) -> Cube:
    """Drop literals while the cube still refutes the candidate and implies the critical property."""
    lits = list(cube.literals)
    for lit in list(lits):
        trial = [x for x in lits if x != lit]
        body = cube_to_formula(Cube(tuple(trial)))
        if ctx.unsat(And(body, candidate)) and ctx.unsat(And(body, Not(critical))):
            lits = trial
    shrunk = Cube(tuple(lits))
    if not ctx.unsat(And(cube_to_formula(shrunk), Not(critical))):
        return cube
    return shrunk


def _project(m, s: Spec, cfg: WeakenConfig, candidate: Formula, ctx: _Ctx) -> Cube:
    keep = s.visible | s.hidden if cfg.keep_hidden else s.visible
    cube = cube_of_model(m, sorted(keep))
    if cfg.generalize_cex:
        cube = _generalize(cube, candidate, s.critical, ctx)
    return cube


def project_counterexample(
    m, s: Spec, cfg: Optional[WeakenConfig] = None, candidate: Optional[Formula] = None
) -> Cube:
    """Cube of ``m`` over the visible variables (plus hidden ones with ``keep_hidden``).

    Generalization needs the candidate being refuted; without one it is skipped.
    """
    cfg = cfg or WeakenConfig()
    if candidate is None:
        cfg = WeakenConfig(keep_hidden=cfg.keep_hidden)
        candidate = s.desired
    return _project(m, s, cfg, candidate, _Ctx(cfg))


def integrate(c: Candidate, cube: Cube) -> Candidate:
    return Candidate(c.index + 1, Or(c.formula, cube_to_formula(cube)))


def _simplify(final: Formula, s: Spec, cfg: WeakenConfig, ctx: _Ctx) -> tuple[Formula, str]:
    from . import simplify

    if not cfg.simplify:
        return final, "none"
    order = sorted(variables(final))
    try:
        dnf = simplify.minimal_dnf(final, order, stats=ctx.stats)
        method = "exact"
    except (TooManyVariablesError, ResourceLimitError) as exc:
        log.info("exact minimization unavailable (%s); using greedy cover", exc)
        dnf = simplify.greedy_dnf(final, order, stats=ctx.stats)
        method = "greedy"
    if cfg.sugar:
        dnf = simplify.resugar_implication(dnf)
    return dnf, method


def weaken(s: Spec, cfg: Optional[WeakenConfig] = None, stats: Optional[SolverStats] = None) -> Outcome:
    cfg = cfg or WeakenConfig()
    ctx = _Ctx(cfg, stats if stats is not None else SolverStats())
    trace: list[IterationRecord] = []
    try:
        wf = _well_formed_check(s, ctx)
        if isinstance(wf, CounterModel):
            return NotWellFormed(wf.model)
        pre = _precheck(s, ctx)
        if not isinstance(pre, Proceed):
            return pre

        limit = cfg.iteration_bound(s)
        cand = Candidate(0, s.desired)
        while True:
            result = ctx.valid(build_F(s, cand))
            if isinstance(result, Valid):
                simplified, method = _simplify(cand.formula, s, cfg, ctx)
                return Weakened(cand.formula, simplified, tuple(trace), method)
            if len(trace) >= limit:
                return IterationLimit(tuple(trace), limit)
            m = result.model
            if not (evaluate(s.assumption, m) and not evaluate(cand.formula, m)):
                # only conjunct 1 can fail while every cube implies P_C
                raise AssertionError(f"counterexample {m} does not refute A -> candidate")
            cube = _project(m, s, cfg, cand.formula, ctx)
            nxt = integrate(cand, cube)
            trace.append(IterationRecord(cand.index, m, cube, nxt.formula))
            log.debug("iteration %d: cube %s", cand.index, cube.as_dict())
            cand = nxt
    except ResourceLimitError as exc:
        return ResourceLimit(tuple(trace), str(exc))

