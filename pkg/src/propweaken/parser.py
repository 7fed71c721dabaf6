"""Concrete syntax for formulas and ``.wspec`` files.

Formula grammar, loosest binding first::

    formula := iff
    iff     := imp ( "<->" iff )?
    imp     := or ( "->" imp )?
    or      := and ( "|" and )*
    and     := not ( "&" not )*
    not     := "!" not | atom
    atom    := "true" | "false" | IDENT | "(" formula ")"

``#`` starts a comment that runs to the end of the line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import TYPE_CHECKING
from .formula import (
    AUX_PREFIX,
    BINARY,
    And,
    Atom,
    ConstFalse,
    ConstTrue,
    FALSE,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    TRUE,
    fold,
)

if TYPE_CHECKING:
    from .weaken import Spec

MAX_INPUT_BYTES = 1 << 20
MAX_NESTING = 100

SECTIONS = ("assume", "desired", "critical")
_SECTION_RE = re.compile(r"^[ \t]*([A-Za-z_][A-Za-z0-9_]*)[ \t]*:", re.M)
_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r\n]+)|(?P<comment>#[^\n]*)|(?P<op><->|->|[!&|()])"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
)


class ParseError(Exception):
    KINDS = ("Lex", "Syntax", "DuplicateSection", "MissingSection", "ReservedName")

    def __init__(self, kind: str, message: str, line: int, column: int, source_name: str = "<input>"):
        assert kind in self.KINDS
        super().__init__(f"{source_name}:{line}:{column}: {kind} error: {message}")
        self.kind = kind
        self.message = message
        self.line = line
        self.column = column
        self.source_name = source_name


@dataclass(frozen=True)
class SpecDocument:
    assumption_text: str
    desired_text: str
    critical_text: str
    source_name: str = "<input>"


def _line_col(text: str, offset: int) -> tuple[int, int]:
    offset = max(0, min(offset, len(text)))
    line = text.count("\n", 0, offset) + 1
    start = text.rfind("\n", 0, offset) + 1
    return line, offset - start + 1


def _last_position(text: str) -> int:
    """Offset of the last character, so positions stay inside the text."""
    return max(0, len(text.rstrip("\n")) - 1) if text else 0


@dataclass(frozen=True)
class _Token:
    kind: str  # "op", "ident", "end"
    value: str
    offset: int


class _Parser:
    def __init__(self, text: str, start: int, end: int, source_name: str):
        self.text = text
        self.source_name = source_name
        self.tokens = self._lex(start, end)
        self.pos = 0
        self.nesting = 0

    def error(self, kind: str, message: str, offset: int) -> ParseError:
        if offset >= len(self.text):
            offset = _last_position(self.text)
        line, col = _line_col(self.text, offset)
        return ParseError(kind, message, line, col, self.source_name)

    def _lex(self, start: int, end: int) -> list[_Token]:
        tokens = []
        i = start
        while i < end:
            m = _TOKEN_RE.match(self.text, i, end)
            if m is None:
                raise self.error("Lex", f"unexpected character {self.text[i]!r}", i)
            kind = m.lastgroup
            if kind in ("op", "ident"):
                value = m.group()
                if kind == "ident" and value.startswith(AUX_PREFIX):
                    raise self.error(
                        "ReservedName", f"identifier {value!r} uses the reserved prefix {AUX_PREFIX!r}", i
                    )
                tokens.append(_Token(kind, value, i))
            i = m.end()
        # errors "at end of input" point at the last character of the last token
        last = tokens[-1].offset + len(tokens[-1].value) - 1 if tokens else max(start - 1, 0)
        tokens.append(_Token("end", "", last))
        return tokens

    @property
    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def accept(self, op: str) -> bool:
        tok = self.peek
        if tok.kind == "op" and tok.value == op:
            self.pos += 1
            return True
        return False

    def parse(self) -> Formula:
        f = self.iff()
        tok = self.peek
        if tok.kind != "end":
            raise self.error("Syntax", f"unexpected {tok.value!r} after formula", tok.offset)
        return f

    def iff(self) -> Formula:
        return self._right_chain("<->", Iff, self.imp)

    def imp(self) -> Formula:
        return self._right_chain("->", Implies, self.or_)

    def _right_chain(self, op, node, operand) -> Formula:
        parts = [operand()]
        while self.accept(op):
            parts.append(operand())
        f = parts[-1]
        for left in reversed(parts[:-1]):
            f = node(left, f)
        return f

    def or_(self) -> Formula:
        f = self.and_()
        while self.accept("|"):
            f = Or(f, self.and_())
        return f

    def and_(self) -> Formula:
        f = self.not_()
        while self.accept("&"):
            f = And(f, self.not_())
        return f

    def not_(self) -> Formula:
        bangs = 0
        while self.accept("!"):
            bangs += 1
        f = self.atom()
        for _ in range(bangs):
            f = Not(f)
        return f

    def atom(self) -> Formula:
        tok = self.peek
        if tok.kind == "ident":
            self.pos += 1
            if tok.value == "true":
                return TRUE
            if tok.value == "false":
                return FALSE
            return Atom(tok.value)
        if self.accept("("):
            f = self.descend(self.iff)
            if not self.accept(")"):
                bad = self.peek
                what = "end of input" if bad.kind == "end" else repr(bad.value)
                raise self.error("Syntax", f"expected ')' but found {what}", bad.offset)
            return f
        what = "end of input" if tok.kind == "end" else repr(tok.value)
        raise self.error("Syntax", f"expected a formula but found {what}", tok.offset)

    def descend(self, rule):
        self.nesting += 1
        if self.nesting > MAX_NESTING:
            raise self.error("Syntax", "formula nested too deeply", self.peek.offset)
        try:
            return rule()
        finally:
            self.nesting -= 1


def _check_size(text: str, source_name: str) -> None:
    if len(text.encode("utf-8")) > MAX_INPUT_BYTES:
        raise ParseError("Lex", "input exceeds 1 MiB", 1, 1, source_name)


def parse_formula(text: str, source_name: str = "<input>") -> Formula:
    _check_size(text, source_name)
    return _Parser(text, 0, len(text), source_name).parse()


def split_spec(text: str, source_name: str = "<input>") -> tuple[SpecDocument, dict[str, Formula]]:
    """Locate the three sections of a spec file and parse each formula."""
    _check_size(text, source_name)
    seen: set[str] = set()
    headers = []
    for m in _SECTION_RE.finditer(text):
        keyword = m.group(1)
        line, col = _line_col(text, m.start(1))
        if keyword not in SECTIONS:
            if keyword == "hidden":
                raise ParseError(
                    "Syntax",
                    "a 'hidden:' section is not allowed; hidden variables are derived from the formulas",
                    line, col, source_name,
                )
            # an identifier followed by ':' is never valid formula text
            raise ParseError("Syntax", f"unknown section {keyword!r}", line, col, source_name)
        if keyword in seen:
            raise ParseError("DuplicateSection", f"section {keyword!r} appears more than once", line, col, source_name)
        seen.add(keyword)
        headers.append((keyword, m.start(), m.end()))

    preamble_end = headers[0][1] if headers else len(text)
    leftover = _Parser(text, 0, preamble_end, source_name).tokens
    if leftover[0].kind != "end":
        raise ParseError("Syntax", "text before the first section", *_line_col(text, leftover[0].offset), source_name)

    for name in SECTIONS:
        if name not in seen:
            line, col = _line_col(text, _last_position(text))
            raise ParseError("MissingSection", f"missing section '{name}:'", line, col, source_name)

    formulas = {}
    texts = {}
    for k, (keyword, _, body_start) in enumerate(headers):
        body_end = headers[k + 1][1] if k + 1 < len(headers) else len(text)
        parser = _Parser(text, body_start, body_end, source_name)
        if parser.tokens[0].kind == "end":
            offset = body_start - 1
            raise ParseError("Syntax", f"section '{keyword}:' has no formula", *_line_col(text, offset), source_name)
        formulas[keyword] = parser.parse()
        texts[keyword] = text[body_start:body_end].strip()
    doc = SpecDocument(texts["assume"], texts["desired"], texts["critical"], source_name)
    return doc, formulas


def parse_spec(text: str, source_name: str = "<input>") -> Spec:
    from .weaken import Spec

    _, formulas = split_spec(text, source_name)
    return Spec(formulas["assume"], formulas["desired"], formulas["critical"])


def load_spec(path) -> Spec:
    with open(path, encoding="utf-8") as fh:
        return parse_spec(fh.read(), str(path))


# --- pretty printing ---------------------------------------------------------

_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4}
_SYMBOL = {Iff: "<->", Implies: "->", Or: "|", And: "&"}
_ATOM_PREC = 6


def pretty_print(f: Formula) -> str:
    """Render ``f`` so that it parses back to the same tree.

    Parentheses are minimal except that a binary left operand of ``->`` or
    ``<->`` is always bracketed: ``(a | b) -> c`` rather than ``a | b -> c``.
    """

    def leaf(node):
        if isinstance(node, ConstTrue):
            return "true", _ATOM_PREC
        if isinstance(node, ConstFalse):
            return "false", _ATOM_PREC
        return node.name, _ATOM_PREC

    def unary(_node, arg):
        text, prec = arg
        return ("!" + (text if prec >= 5 else f"({text})"), 5)

    def binary(node, left, right):
        kind = type(node)
        prec = _PREC[kind]
        # &, | associate left; ->, <-> associate right
        left_assoc = kind in (And, Or)
        ltext, lprec = left
        rtext, rprec = right
        # binary operands of -> and <-> are always bracketed for readability
        if lprec < prec or (lprec == prec and not left_assoc) or (not left_assoc and lprec < 5):
            ltext = f"({ltext})"
        if rprec < prec or (rprec == prec and left_assoc):
            rtext = f"({rtext})"
        return f"{ltext} {_SYMBOL[kind]} {rtext}", prec

    return fold(f, leaf, unary, binary)[0]


def format_literals(lits) -> str:
    """Flat ``a & !b`` rendering of a literal sequence, ``true`` when empty."""
    parts = [lit.variable if lit.positive else "!" + lit.variable for lit in lits]
    return " & ".join(parts) if parts else "true"


assert set(_PREC) == set(BINARY)
