"""Counterexample-guided weakening of propositional properties."""

from .formula import Formula, Cube, Literal, cube_of_model, cube_to_formula, evaluate, to_cnf, variables
from .parser import ParseError, load_spec, parse_formula, parse_spec, pretty_print
from .weaken import Spec, WeakenConfig, weaken

__all__ = [
    "Cube",
    "Formula",
    "Literal",
    "ParseError",
    "Spec",
    "WeakenConfig",
    "cube_of_model",
    "cube_to_formula",
    "evaluate",
    "load_spec",
    "parse_formula",
    "parse_spec",
    "pretty_print",
    "to_cnf",
    "variables",
    "weaken",
]
