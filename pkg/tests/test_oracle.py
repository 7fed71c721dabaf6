import pytest
from hypothesis import given

from conftest import NAMES, formulas
from propweaken.formula import FALSE, TRUE, And, Atom, Implies, Not, Or, evaluate
from propweaken.oracle import (
    TooManyVariablesError,
    equivalent,
    semantic_weakening,
    table_of,
)
from propweaken.parser import parse_formula as P
from propweaken.weaken import Spec

X = Atom("X")
DRONE_ORDER = ["L", "R_3", "R_4", "W_H", "W_L"]


def test_table_examples():
    assert list(table_of(X, ["X"]).rows) == [False, True]
    assert list(table_of(TRUE, []).rows) == [True]


def test_drone_assumption_table(drone):
    rows = table_of(drone.assumption, DRONE_ORDER).rows
    assert len(rows) == 32
    for k in range(32):
        L, R3, R4, WH, WL = (bool(k >> i & 1) for i in range(5))
        expected = R3 and (not (R4 and (WH or WL)) or L) and (not (R3 and WL) or L)
        assert rows[k] == expected


def test_equivalent_examples(drone):
    assert equivalent(P("!W_L | L"), P("W_L -> L"))
    assert not equivalent(X, Atom("Y"))
    p1 = P("((W_H | W_L) -> L) | !L & W_H & !W_L")
    assert equivalent(p1, P("W_L -> L"))


def test_semantic_weakening_examples(drone):
    assert semantic_weakening(drone) == table_of(P("W_L -> L"), ["L", "W_H", "W_L"])
    no_hidden = Spec(FALSE, P("a & b"), TRUE)
    assert semantic_weakening(no_hidden) == table_of(P("a & b"), ["a", "b"])
    assert semantic_weakening(Spec(TRUE, P("a & b"), TRUE)).rows.all()


def test_limits():
    names = [f"x{i}" for i in range(21)]
    with pytest.raises(TooManyVariablesError):
        table_of(X, names)


@given(formulas())
def test_structural_recursion(f):
    t = table_of(f, NAMES).rows
    g = Atom("a")
    assert (table_of(Not(f), NAMES).rows == ~t).all()
    assert (table_of(And(f, g), NAMES).rows == (t & table_of(g, NAMES).rows)).all()
    assert (table_of(Or(f, g), NAMES).rows == (t | table_of(g, NAMES).rows)).all()
    assert (table_of(Implies(f, g), NAMES).rows == (~t | table_of(g, NAMES).rows)).all()


@given(formulas())
def test_rows_match_eval(f):
    t = table_of(f, NAMES)
    for k in (0, 5, 77, 255):
        m = {n: bool(k >> i & 1) for i, n in enumerate(NAMES)}
        assert t.rows[k] == evaluate(f, m)
