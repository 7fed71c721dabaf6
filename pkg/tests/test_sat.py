import pytest
from hypothesis import given, settings

from conftest import formulas
from propweaken import oracle
from propweaken.formula import FALSE, And, Atom, CnfInstance, Implies, Not, Or, evaluate, to_cnf
from propweaken.sat import (
    CounterModel,
    ResourceLimitError,
    Sat,
    SolverStats,
    Unsat,
    Valid,
    is_satisfiable,
    is_valid,
    solve,
)
from propweaken.weaken import Candidate, build_F

X, Y = Atom("X"), Atom("Y")


def cnf(clauses, names):
    return CnfInstance(tuple(names), tuple(map(tuple, clauses)), frozenset(names), frozenset())


def test_solve_examples():
    assert solve(cnf([[1]], ["X"])) == Sat({"X": True})
    assert solve(cnf([[1], [-1]], ["X"])) == Unsat()


def test_drone_counterexample(drone):
    f = And(drone.assumption, Not(drone.desired))
    result = solve(to_cnf(f))
    assert isinstance(result, Sat)
    assert evaluate(f, result.model)


def test_is_valid_examples(drone):
    assert is_valid(Or(X, Not(X))) == Valid()
    assert is_valid(X) == CounterModel({"X": False})
    result = is_valid(build_F(drone, Candidate(0, drone.desired)))
    assert isinstance(result, CounterModel)
    assert evaluate(drone.assumption, result.model)
    assert not evaluate(drone.desired, result.model)


def test_is_satisfiable_examples(drone):
    assert is_satisfiable(FALSE) == Unsat()
    assert is_satisfiable(And(X, Not(Y))) == Sat({"X": True, "Y": False})
    result = is_satisfiable(drone.assumption)
    assert isinstance(result, Sat) and evaluate(drone.assumption, result.model)
    assert oracle.satisfiable(drone.assumption)


def test_unassigned_totalized_false():
    # Y never constrained once X is decided
    result = is_satisfiable(Or(Not(X), Y))
    assert result == Sat({"X": False, "Y": False})


def test_decision_cap():
    f = Or(Atom("a"), Atom("b"))
    for i in range(6):
        f = And(f, Or(Atom(f"p{i}"), Atom(f"q{i}")))
    with pytest.raises(ResourceLimitError):
        is_satisfiable(And(f, Not(Atom("z"))), decision_cap=2)


def test_stats_accumulate():
    stats = SolverStats()
    is_valid(Implies(And(X, Y), X), stats=stats)
    is_valid(Implies(Or(X, Y), X), stats=stats)
    assert stats.calls == 2
    assert stats.decisions >= 0 and stats.propagations > 0 and stats.conflicts >= 1


@settings(max_examples=300)
@given(formulas())
def test_agrees_with_truth_table(f):
    result = is_satisfiable(f)
    assert isinstance(result, Sat) == oracle.satisfiable(f)
    if isinstance(result, Sat):
        assert set(result.model) == set(oracle.table_of(f, sorted(result.model)).order)


@settings(max_examples=100)
@given(formulas())
def test_deterministic(f):
    assert is_satisfiable(f) == is_satisfiable(f)
    assert is_valid(f) == is_valid(f)


@settings(max_examples=200)
@given(formulas())
def test_validity_countermodel(f):
    result = is_valid(f)
    assert isinstance(result, Valid) == oracle.valid(f)
    if isinstance(result, CounterModel):
        assert not evaluate(f, result.model)
