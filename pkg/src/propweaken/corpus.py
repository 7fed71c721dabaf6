"""Seeded random formulas and specs for property tests and experiments."""

from __future__ import annotations

import random
from typing import Sequence

from .formula import FALSE, TRUE, And, Atom, Formula, Iff, Implies, Not, Or, depth
from .weaken import Spec

_BINARY = (And, Or, Implies, Iff)


def random_formula(rng: random.Random, names: Sequence[str], max_depth: int, leaf_bias: float = 0.3) -> Formula:
    if max_depth == 0 or not names or rng.random() < leaf_bias:
        r = rng.random()
        if r < 0.06 or not names:
            return TRUE if rng.random() < 0.5 else FALSE
        return Atom(rng.choice(names))
    r = rng.random()
    if r < 0.2:
        return Not(random_formula(rng, names, max_depth - 1, leaf_bias))
    op = rng.choice(_BINARY)
    return op(
        random_formula(rng, names, max_depth - 1, leaf_bias),
        random_formula(rng, names, max_depth - 1, leaf_bias),
    )


def random_spec(rng: random.Random, max_visible: int = 4, max_hidden: int = 3, max_depth: int = 6) -> Spec:
    """A well-formed spec: the critical property is widened by the desired one."""
    visible = [f"v{i}" for i in range(rng.randint(1, max_visible))]
    hidden = [f"h{i}" for i in range(rng.randint(0, max_hidden))]
    desired = random_formula(rng, visible, max_depth - 1)
    if rng.random() < 0.35:
        critical = TRUE
    else:
        critical = Or(random_formula(rng, visible, max_depth - 2), desired)
    assumption = random_formula(rng, visible + hidden, max_depth, leaf_bias=0.15)
    spec = Spec(assumption, desired, critical)
    assert depth(spec.critical) <= max_depth and depth(spec.assumption) <= max_depth
    return spec


def spec_corpus(seed: int, count: int, **kw) -> list[Spec]:
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        spec = random_spec(rng, **kw)
        if len(spec.hidden) <= kw.get("max_hidden", 3):
            out.append(spec)
    return out


def formula_corpus(seed: int, count: int, max_vars: int = 12, max_depth: int = 7) -> list[Formula]:
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        names = [f"x{i}" for i in range(rng.randint(1, max_vars))]
        out.append(random_formula(rng, names, rng.randint(1, max_depth), leaf_bias=0.1))
    return out

