"""Brute-force truth tables, kept independent of the SAT and minimizer paths.

Row ``k`` of a table over ``order`` is the assignment where ``order[i]`` is
bit ``i`` of ``k`` (variable 0 is the least significant bit).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .formula import And, Atom, ConstTrue, Formula, Iff, Implies, Or, TooManyVariablesError, fold, variables

MAX_VARS = 20


@dataclass(frozen=True, eq=False)
class TruthTable:
    order: tuple[str, ...]
    rows: np.ndarray

    def __post_init__(self):
        if len(self.rows) != 1 << len(self.order):
            raise ValueError("row count must be 2^n")

    def __eq__(self, other):
        if not isinstance(other, TruthTable):
            return NotImplemented
        return self.order == other.order and np.array_equal(self.rows, other.rows)

    def __hash__(self):
        return hash((self.order, self.rows.tobytes()))

    def models(self) -> list[dict[str, bool]]:
        return [
            {v: bool(k >> i & 1) for i, v in enumerate(self.order)}
            for k in np.flatnonzero(self.rows)
        ]


def _columns(n: int) -> np.ndarray:
    k = np.arange(1 << n, dtype=np.int64)
    return np.array([(k >> i) & 1 for i in range(n)], dtype=bool).reshape(n, 1 << n)


def table_of(f: Formula, order: Sequence[str]) -> TruthTable:
    order = tuple(order)
    if len(order) > MAX_VARS:
        raise TooManyVariablesError(f"{len(order)} variables exceed the oracle limit of {MAX_VARS}")
    missing = variables(f) - set(order)
    if missing:
        raise ValueError(f"variables {sorted(missing)} not in the ordering")
    cols = _columns(len(order))
    where = {v: i for i, v in enumerate(order)}
    width = 1 << len(order)

    def leaf(node):
        if isinstance(node, Atom):
            return cols[where[node.name]]
        return np.full(width, isinstance(node, ConstTrue))

    def binary(node, a, b):
        if isinstance(node, And):
            return a & b
        if isinstance(node, Or):
            return a | b
        if isinstance(node, Implies):
            return ~a | b
        assert isinstance(node, Iff)
        return a == b

    return TruthTable(order, fold(f, leaf, lambda _, a: ~a, binary))


def equivalent(f: Formula, g: Formula) -> bool:
    order = sorted(variables(f) | variables(g))
    return table_of(f, order) == table_of(g, order)


def valid(f: Formula) -> bool:
    return bool(table_of(f, sorted(variables(f))).rows.all())


def satisfiable(f: Formula) -> bool:
    return bool(table_of(f, sorted(variables(f))).rows.any())


def semantic_weakening(spec) -> TruthTable:
    """Visible assignments satisfying the desired property or extending to a model of the assumption."""
    visible = sorted(spec.visible)
    hidden = sorted(spec.hidden)
    if len(visible) + len(hidden) > MAX_VARS:
        raise TooManyVariablesError(
            f"{len(visible) + len(hidden)} variables exceed the oracle limit of {MAX_VARS}"
        )
    a_rows = table_of(spec.assumption, visible + hidden).rows
    # hidden bits are the high bits, so each row of this view is one hidden assignment
    projected = a_rows.reshape(1 << len(hidden), 1 << len(visible)).any(axis=0)
    desired = table_of(spec.desired, visible).rows
    return TruthTable(tuple(visible), desired | projected)
