"""Two-level minimization of weakened properties.

The exact path is Quine-McCluskey prime generation followed by a
branch-and-bound Petrick cover minimizing literal count. Above the exact cap
a SAT-driven greedy cover is used instead. Every result is checked
equivalent to its input with the SAT solver before it is returned.

Truth-table rows are indexed with variable ``order[0]`` as the least
significant bit. Implicants are ``(care, value)`` bit pairs over ``order``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

from .formula import (
    FALSE,
    TRUE,
    And,
    Atom,
    ConstFalse,
    ConstTrue,
    Formula,
    Iff,
    Implies,
    Literal,
    Not,
    Or,
    TooManyVariablesError,
    conjoin,
    disjoin,
    fold,
    variables,
)
from .sat import DEFAULT_DECISION_CAP, ResourceLimitError, SolverStats, Unsat, Valid, is_satisfiable, is_valid

EXACT_CAP = 12
SEARCH_BUDGET = 10**6


class InternalEquivalenceFailure(AssertionError):
    pass


@dataclass(frozen=True, order=True)
class Implicant:
    care: int
    value: int

    def __post_init__(self):
        if self.value & ~self.care:
            raise ValueError("value bits outside the care mask")

    @property
    def num_literals(self) -> int:
        return bin(self.care).count("1")

    def literals(self, order: Sequence[str]) -> list[Literal]:
        lits = [Literal(order[i], bool(self.value >> i & 1)) for i in range(len(order)) if self.care >> i & 1]
        return sorted(lits)


@lru_cache(maxsize=32)
def _var_masks(n: int) -> tuple[int, ...]:
    """Row bitsets: bit k of masks[i] is set iff row k assigns variable i true."""
    rows = 1 << n
    return tuple(sum(1 << k for k in range(rows) if k >> i & 1) for i in range(n))


def onset(f: Formula, order: Sequence[str]) -> int:
    """Bitset of the rows (assignments over ``order``) satisfying ``f``."""
    n = len(order)
    missing = variables(f) - set(order)
    if missing:
        raise ValueError(f"variables {sorted(missing)} not in the ordering")
    masks = _var_masks(n)
    full = (1 << (1 << n)) - 1
    where = {name: i for i, name in enumerate(order)}

    def leaf(node):
        if isinstance(node, Atom):
            return masks[where[node.name]]
        return full if isinstance(node, ConstTrue) else 0

    def binary(node, a, b):
        if isinstance(node, And):
            return a & b
        if isinstance(node, Or):
            return a | b
        if isinstance(node, Implies):
            return (full & ~a) | b
        return full & ~(a ^ b)

    return fold(f, leaf, lambda _, a: full & ~a, binary)


def coverage(imp: Implicant, n: int) -> int:
    masks = _var_masks(n)
    out = (1 << (1 << n)) - 1
    for i in range(n):
        if imp.care >> i & 1:
            out &= masks[i] if imp.value >> i & 1 else ~masks[i]
    return out


def prime_implicants(on: int, n: int) -> list[Implicant]:
    full_care = (1 << n) - 1
    level = {(full_care, k) for k in range(1 << n) if on >> k & 1}
    primes = []
    while level:
        merged = set()
        nxt = set()
        for care, value in level:
            for i in range(n):
                bit = 1 << i
                if care & bit and not value & bit and (care, value | bit) in level:
                    nxt.add((care & ~bit, value))
                    merged.add((care, value))
                    merged.add((care, value | bit))
        primes.extend(Implicant(c, v) for c, v in level - merged)
        level = nxt
    return sorted(primes)


def _term_key(imp: Implicant, order: Sequence[str]) -> tuple:
    return tuple((lit.variable, not lit.positive) for lit in imp.literals(order))


def _dnf_formula(terms: Sequence[Implicant], order: Sequence[str]) -> Formula:
    if any(t.care == 0 for t in terms):
        return TRUE
    ranked = sorted(terms, key=lambda t: _term_key(t, order))
    return disjoin(conjoin(lit.to_formula() for lit in t.literals(order)) for t in ranked)


def _min_cover(primes: list[Implicant], on: int, order: Sequence[str]) -> list[Implicant]:
    """Minimum-literal prime cover; ties go to fewer terms, then the smallest sorted term keys."""
    n = len(order)
    covers = [coverage(p, n) for p in primes]
    costs = [p.num_literals for p in primes]
    keys = [_term_key(p, order) for p in primes]
    by_row: dict[int, list[int]] = {}
    for j, cov in enumerate(covers):
        rest = cov & on
        while rest:
            low = rest & -rest
            by_row.setdefault(low.bit_length() - 1, []).append(j)
            rest ^= low
    for js in by_row.values():
        js.sort(key=lambda j: (costs[j], keys[j]))

    chosen: list[int] = []
    remaining = on
    # essential primes: the only cover of some row
    changed = True
    while changed and remaining:
        changed = False
        for row, js in by_row.items():
            if remaining >> row & 1 and len(js) == 1:
                chosen.append(js[0])
                remaining &= ~covers[js[0]]
                changed = True
    base = sum(costs[j] for j in chosen)

    best: list = [None]  # (literals, terms, sorted keys, indices)
    budget = [SEARCH_BUDGET]

    def search(uncovered: int, picked: list[int], lits: int) -> None:
        budget[0] -= 1
        if budget[0] < 0:
            raise ResourceLimitError("cover search budget exhausted")
        if not uncovered:
            cand = (lits, len(picked), sorted(keys[j] for j in picked), list(picked))
            if best[0] is None or cand[:3] < best[0][:3]:
                best[0] = cand
            return
        options = None
        rest = uncovered
        while rest:
            low = rest & -rest
            js = by_row[low.bit_length() - 1]
            if options is None or len(js) < len(options):
                options = js
                if len(js) == 1:
                    break
            rest ^= low
        bound = costs[options[0]]
        if best[0] is not None and lits + bound > best[0][0]:
            return
        for j in options:
            if best[0] is not None and lits + costs[j] > best[0][0]:
                break
            picked.append(j)
            search(uncovered & ~covers[j], picked, lits + costs[j])
            picked.pop()

    search(remaining, list(chosen), base)
    return [primes[j] for j in best[0][3]]


def literal_count(f: Formula) -> int:
    return fold(f, lambda node: int(isinstance(node, Atom)), lambda _, a: a, lambda _, a, b: a + b)


def _verify(f: Formula, g: Formula, stats, decision_cap) -> None:
    if not isinstance(is_valid(Iff(f, g), decision_cap, stats), Valid):
        raise InternalEquivalenceFailure("minimized formula is not equivalent to its input")


def minimal_dnf(
    f: Formula,
    order: Sequence[str],
    cap: int = EXACT_CAP,
    stats: Optional[SolverStats] = None,
    decision_cap: int = DEFAULT_DECISION_CAP,
) -> Formula:
    """Minimum-literal DNF of ``f`` over ``order``."""
    order = list(order)
    if len(order) > cap:
        raise TooManyVariablesError(f"{len(order)} variables exceed the exact cap of {cap}")
    n = len(order)
    on = onset(f, order)
    full = (1 << (1 << n)) - 1
    if on == 0:
        g = FALSE
    elif on == full:
        g = TRUE
    else:
        primes = prime_implicants(on, n)
        g = _dnf_formula(_min_cover(primes, on, order), order)
    _verify(f, g, stats, decision_cap)
    return g


def _unsat(f: Formula, stats, decision_cap) -> bool:
    return isinstance(is_satisfiable(f, decision_cap, stats), Unsat)


def greedy_dnf(
    f: Formula,
    order: Sequence[str],
    stats: Optional[SolverStats] = None,
    decision_cap: int = DEFAULT_DECISION_CAP,
) -> Formula:
    """Equivalent DNF built from SAT witnesses, each expanded to a prime.

    A witness of ``f`` not yet covered is turned into a full cube over
    ``order``; literals are dropped in order while the cube still implies
    ``f``. Redundant terms are removed at the end.
    """
    order = list(order)
    missing = variables(f) - set(order)
    if missing:
        raise ValueError(f"variables {sorted(missing)} not in the ordering")
    terms: list[list[Literal]] = []
    covered: Formula = FALSE
    while True:
        result = is_satisfiable(And(f, Not(covered)), decision_cap, stats)
        if isinstance(result, Unsat):
            break
        lits = [Literal(v, result.model.get(v, False)) for v in order]
        for lit in list(lits):
            trial = [x for x in lits if x != lit]
            body = conjoin(x.to_formula() for x in trial)
            if _unsat(And(body, Not(f)), stats, decision_cap):
                lits = trial
        terms.append(sorted(lits))
        covered = Or(covered, conjoin(x.to_formula() for x in lits))

    for term in list(terms):
        others = [t for t in terms if t is not term]
        body = conjoin(x.to_formula() for x in term)
        rest = disjoin(conjoin(x.to_formula() for x in t) for t in others)
        if _unsat(And(body, Not(rest)), stats, decision_cap):
            terms = others

    if any(not t for t in terms):
        g = TRUE
    else:
        ranked = sorted(terms, key=lambda t: [(x.variable, not x.positive) for x in t])
        g = disjoin(conjoin(x.to_formula() for x in t) for t in ranked)
    _verify(f, g, stats, decision_cap)
    return g


def _split(f: Formula, kind) -> list[Formula]:
    out, stack = [], [f]
    while stack:
        node = stack.pop()
        if isinstance(node, kind):
            stack.append(node.right)
            stack.append(node.left)
        else:
            out.append(node)
    return out


def _literal(node: Formula) -> Optional[Literal]:
    if isinstance(node, Atom):
        return Literal(node.name, True)
    if isinstance(node, Not) and isinstance(node.arg, Atom):
        return Literal(node.arg.name, False)
    return None


def resugar_implication(f: Formula) -> Formula:
    """Rewrite ``!a | !b & !c | rest`` as ``a & (b | c) -> rest``.

    Applies only to a DNF with at least one all-negative term and at least
    one other term; anything else comes back unchanged.
    """
    if isinstance(f, (ConstTrue, ConstFalse)):
        return f
    negative, rest = [], []
    for term in _split(f, Or):
        lits = [_literal(x) for x in _split(term, And)]
        if any(lit is None for lit in lits):
            return f
        if all(not lit.positive for lit in lits):
            negative.append(disjoin(Atom(lit.variable) for lit in lits))
        else:
            rest.append(term)
    if not negative or not rest:
        return f
    g = Implies(conjoin(negative), disjoin(rest))
    _verify(f, g, None, DEFAULT_DECISION_CAP)
    return g


def is_prime_term(term: Formula, f: Formula) -> bool:
    """True when ``term`` implies ``f`` and no single literal can be dropped."""
    lits = [_literal(x) for x in _split(term, And)] if not isinstance(term, ConstTrue) else []
    if not isinstance(is_valid(Implies(term, f)), Valid):
        return False
    for k in range(len(lits)):
        weaker = conjoin(x.to_formula() for j, x in enumerate(lits) if j != k)
        if isinstance(is_valid(Implies(weaker, f)), Valid):
            return False
    return True


def dnf_terms(f: Formula) -> list[Formula]:
    if isinstance(f, ConstFalse):
        return []
    return _split(f, Or)
