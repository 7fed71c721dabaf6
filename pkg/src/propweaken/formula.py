"""Propositional formulas, models, cubes and the Tseitin CNF bridge.

Variables are plain strings. Formulas are immutable trees; every traversal
here is iterative so that long disjunction chains built by the weakening
loop do not hit the interpreter's recursion limit.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, TypeVar, Union

IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
AUX_PREFIX = "__t"

Model = Mapping[str, bool]


class UnboundVariableError(KeyError):
    def __init__(self, name: str):
        super().__init__(name)
        self.name = name

    def __str__(self) -> str:
        return f"variable {self.name!r} is not assigned by the model"


class ReservedNameError(ValueError):
    pass


class TooManyVariablesError(ValueError):
    pass


@dataclass(frozen=True)
class ConstTrue:
    pass


@dataclass(frozen=True)
class ConstFalse:
    pass


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


Formula = Union[ConstTrue, ConstFalse, Atom, Not, And, Or, Implies, Iff]
BINARY = (And, Or, Implies, Iff)

TRUE = ConstTrue()
FALSE = ConstFalse()

T = TypeVar("T")


def fold(
    f: Formula,
    leaf: Callable[[Formula], T],
    unary: Callable[[Formula, T], T],
    binary: Callable[[Formula, T, T], T],
) -> T:
    """Bottom-up fold over ``f`` using an explicit stack.

    Shared subtrees (same object) are folded once.
    """
    done: dict[int, T] = {}
    stack = [f]
    while stack:
        node = stack[-1]
        key = id(node)
        if key in done:
            stack.pop()
            continue
        if isinstance(node, Not):
            if id(node.arg) in done:
                stack.pop()
                done[key] = unary(node, done[id(node.arg)])
            else:
                stack.append(node.arg)
        elif isinstance(node, BINARY):
            pending = [c for c in (node.right, node.left) if id(c) not in done]
            if pending:
                stack.extend(pending)
            else:
                stack.pop()
                done[key] = binary(node, done[id(node.left)], done[id(node.right)])
        else:
            stack.pop()
            done[key] = leaf(node)
    return done[id(f)]


def _apply(node: Formula, a: bool, b: bool) -> bool:
    if isinstance(node, And):
        return a and b
    if isinstance(node, Or):
        return a or b
    if isinstance(node, Implies):
        return (not a) or b
    return a == b


def evaluate(f: Formula, m: Model) -> bool:
    """Standard valuation of ``f`` under ``m``."""

    def leaf(node):
        if isinstance(node, Atom):
            try:
                return bool(m[node.name])
            except KeyError:
                raise UnboundVariableError(node.name) from None
        return isinstance(node, ConstTrue)

    return fold(f, leaf, lambda _, a: not a, _apply)


def variables(f: Formula) -> frozenset[str]:
    names: set[str] = set()
    seen: set[int] = set()
    stack = [f]
    while stack:
        node = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        if isinstance(node, Atom):
            names.add(node.name)
        elif isinstance(node, Not):
            stack.append(node.arg)
        elif isinstance(node, BINARY):
            stack.append(node.left)
            stack.append(node.right)
    return frozenset(names)


def size(f: Formula) -> int:
    """Number of nodes, counting shared subtrees once."""
    return fold(f, lambda _: 1, lambda _, a: a + 1, lambda _, a, b: a + b + 1)


def depth(f: Formula) -> int:
    return fold(f, lambda _: 0, lambda _, a: a + 1, lambda _, a, b: max(a, b) + 1)


def conjoin(parts: Iterable[Formula]) -> Formula:
    """Left-nested conjunction; empty input gives true."""
    out = None
    for p in parts:
        out = p if out is None else And(out, p)
    return TRUE if out is None else out


def disjoin(parts: Iterable[Formula]) -> Formula:
    """Left-nested disjunction; empty input gives false."""
    out = None
    for p in parts:
        out = p if out is None else Or(out, p)
    return FALSE if out is None else out


# --- cubes -----------------------------------------------------------------


@dataclass(frozen=True, order=True)
class Literal:
    variable: str
    positive: bool = True

    def negate(self) -> "Literal":
        return Literal(self.variable, not self.positive)

    def to_formula(self) -> Formula:
        atom = Atom(self.variable)
        return atom if self.positive else Not(atom)


@dataclass(frozen=True)
class Cube:
    """Consistent conjunction of literals, stored sorted by variable name.

    The empty cube stands for true.
    """

    literals: tuple[Literal, ...] = ()

    def __post_init__(self):
        lits = tuple(sorted(set(self.literals)))
        names = [lit.variable for lit in lits]
        if len(set(names)) != len(names):
            raise ValueError(f"inconsistent cube: {lits}")
        object.__setattr__(self, "literals", lits)

    @classmethod
    def from_assignment(cls, assignment: Mapping[str, bool]) -> "Cube":
        return cls(tuple(Literal(v, bool(b)) for v, b in assignment.items()))

    def as_dict(self) -> dict[str, bool]:
        return {lit.variable: lit.positive for lit in self.literals}

    def variables(self) -> frozenset[str]:
        return frozenset(lit.variable for lit in self.literals)

    def __len__(self) -> int:
        return len(self.literals)

    def __iter__(self):
        return iter(self.literals)


def cube_of_model(m: Model, keep: Iterable[str]) -> Cube:
    """Literals of ``m`` restricted to the variables in ``keep``."""
    lits = []
    for name in keep:
        if name not in m:
            raise UnboundVariableError(name)
        lits.append(Literal(name, bool(m[name])))
    return Cube(tuple(lits))


def cube_to_formula(c: Cube) -> Formula:
    """Right-nested conjunction in variable order; empty cube is true."""
    lits = c.literals
    if not lits:
        return TRUE
    out = lits[-1].to_formula()
    for lit in reversed(lits[:-1]):
        out = And(lit.to_formula(), out)
    return out


# --- CNF -------------------------------------------------------------------


@dataclass(frozen=True)
class CnfInstance:
    """Clauses over integer literals in DIMACS convention.

    Variable ``k`` (1-based) is named ``names[k - 1]``. ``original_vars`` are
    the variables of the encoded formula, ``aux_vars`` the Tseitin gates.
    """

    names: tuple[str, ...]
    clauses: tuple[tuple[int, ...], ...]
    original_vars: frozenset[str]
    aux_vars: frozenset[str]

    @property
    def num_vars(self) -> int:
        return len(self.names)

    def index(self) -> dict[str, int]:
        return {name: k + 1 for k, name in enumerate(self.names)}

    def to_dimacs(self) -> str:
        lines = [f"c {k + 1} {name}" for k, name in enumerate(self.names)]
        lines.append(f"p cnf {self.num_vars} {len(self.clauses)}")
        lines.extend(" ".join(map(str, clause + (0,))) for clause in self.clauses)
        return "\n".join(lines) + "\n"


def check_reserved(f: Formula) -> None:
    for name in variables(f):
        if name.startswith(AUX_PREFIX):
            raise ReservedNameError(
                f"variable {name!r} uses the reserved prefix {AUX_PREFIX!r}"
            )


class _Encoder:
    def __init__(self, originals: list[str]):
        self.names = list(originals)
        self.ids = {name: k + 1 for k, name in enumerate(originals)}
        self.clauses: list[tuple[int, ...]] = []
        self.n_aux = 0

    def fresh(self) -> int:
        name = f"{AUX_PREFIX}{self.n_aux}"
        self.n_aux += 1
        self.names.append(name)
        return len(self.names)

    # Each node encodes to an int literal or a bool (constant folded away).
    def leaf(self, node):
        if isinstance(node, Atom):
            return self.ids[node.name]
        return isinstance(node, ConstTrue)

    def unary(self, _node, a):
        return (not a) if isinstance(a, bool) else -a

    def binary(self, node, a, b):
        if isinstance(node, Implies):
            node, a = Or, self.unary(None, a)
        elif isinstance(node, Iff):
            node = Iff
        else:
            node = type(node)
        if node is And:
            if isinstance(a, bool):
                return b if a else False
            if isinstance(b, bool):
                return a if b else False
            if a == b:
                return a
            if a == -b:
                return False
            g = self.fresh()
            self.clauses += [(-g, a), (-g, b), (g, -a, -b)]
            return g
        if node is Or:
            if isinstance(a, bool):
                return True if a else b
            if isinstance(b, bool):
                return True if b else a
            if a == b:
                return a
            if a == -b:
                return True
            g = self.fresh()
            self.clauses += [(g, -a), (g, -b), (-g, a, b)]
            return g
        # Iff
        if isinstance(a, bool):
            return b if a else self.unary(None, b)
        if isinstance(b, bool):
            return a if b else -a
        if a == b:
            return True
        if a == -b:
            return False
        g = self.fresh()
        self.clauses += [(-g, -a, b), (-g, a, -b), (g, a, b), (g, -a, -b)]
        return g


def to_cnf(f: Formula) -> CnfInstance:
    """Equisatisfiable CNF via Tseitin gates with full (two-sided) definitions.

    Every gate is functionally determined by the original variables, so a
    model of the original variables extends uniquely.
    """
    check_reserved(f)
    originals = sorted(variables(f))
    enc = _Encoder(originals)
    root = fold(f, enc.leaf, enc.unary, enc.binary)
    clauses = enc.clauses
    if root is False:
        clauses = clauses + [()]
    elif root is not True:
        clauses = clauses + [(root,)]
    return CnfInstance(
        names=tuple(enc.names),
        clauses=tuple(clauses),
        original_vars=frozenset(originals),
        aux_vars=frozenset(enc.names[len(originals):]),
    )
