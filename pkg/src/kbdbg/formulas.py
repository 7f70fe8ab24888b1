"""Propositional formula language: AST, parser, printer, evaluation.

Connectives, loosest to tightest binding: ``<->``, ``->``, ``|``, ``&``, ``~``.
``->`` and ``<->`` associate to the right, ``&`` and ``|`` to the left.
``true`` and ``false`` are constants and may not be used as atom names.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Mapping, Union

RESERVED_WORDS = frozenset({"true", "false"})
_ATOM_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class ParseError(ValueError):
    """Malformed formula text; carries a 1-based line and column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.bare_message = message
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Atom:
    name: str

    def __post_init__(self):
        if not _ATOM_RE.match(self.name):
            raise ValueError(f"invalid atom name {self.name!r}")
        if self.name in RESERVED_WORDS:
            raise ValueError(f"atom name {self.name!r} is a reserved word")


@dataclass(frozen=True)
class Not:
    operand: "Formula"


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


@dataclass(frozen=True)
class Const:
    value: bool


TRUE = Const(True)
FALSE = Const(False)

Formula = Union[Atom, Not, And, Or, Implies, Iff, Const]

_BINARY = {And: ("&", 4, "left"), Or: ("|", 3, "left"),
           Implies: ("->", 2, "right"), Iff: ("<->", 1, "right")}
_NOT_PREC = 5
_LEAF_PREC = 6


# --- parsing ---------------------------------------------------------------

_TOKEN_RE = re.compile(r"<->|->|[~&|()]|[A-Za-z_][A-Za-z0-9_]*")
_WS_RE = re.compile(r"\s+")


class _Token:
    __slots__ = ("kind", "text", "line", "column")

    def __init__(self, kind, text, line, column):
        self.kind = kind
        self.text = text
        self.line = line
        self.column = column


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    line = 1
    line_start = 0
    n = len(text)
    while pos < n:
        ws = _WS_RE.match(text, pos)
        if ws:
            chunk = ws.group()
            newlines = chunk.count("\n")
            if newlines:
                line += newlines
                line_start = ws.start() + chunk.rfind("\n") + 1
            pos = ws.end()
            continue
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        tok = m.group()
        kind = tok if tok in ("~", "&", "|", "->", "<->", "(", ")") else "name"
        tokens.append(_Token(kind, tok, line, col))
        pos = m.end()
    tokens.append(_Token("eof", "", line, n - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self._tokens = tokens
        self._i = 0

    def _peek(self) -> _Token:
        return self._tokens[self._i]

    def _next(self) -> _Token:
        tok = self._tokens[self._i]
        self._i += 1
        return tok

    def _error(self, message: str) -> ParseError:
        tok = self._peek()
        if tok.kind == "eof":
            return ParseError("unexpected end of input", tok.line, tok.column)
        return ParseError(f"{message}, found {tok.text!r}", tok.line, tok.column)

    def parse(self) -> Formula:
        f = self._iff()
        if self._peek().kind != "eof":
            raise self._error("unexpected trailing input")
        return f

    def _iff(self) -> Formula:
        left = self._implies()
        if self._peek().kind == "<->":
            self._next()
            return Iff(left, self._iff())
        return left

    def _implies(self) -> Formula:
        left = self._or()
        if self._peek().kind == "->":
            self._next()
            return Implies(left, self._implies())
        return left

    def _or(self) -> Formula:
        f = self._and()
        while self._peek().kind == "|":
            self._next()
            f = Or(f, self._and())
        return f

    def _and(self) -> Formula:
        f = self._unary()
        while self._peek().kind == "&":
            self._next()
            f = And(f, self._unary())
        return f

    def _unary(self) -> Formula:
        if self._peek().kind == "~":
            self._next()
            return Not(self._unary())
        return self._primary()

    def _primary(self) -> Formula:
        tok = self._peek()
        if tok.kind == "(":
            self._next()
            f = self._iff()
            if self._peek().kind != ")":
                raise self._error("expected ')'")
            self._next()
            return f
        if tok.kind == "name":
            self._next()
            if tok.text == "true":
                return TRUE
            if tok.text == "false":
                return FALSE
            return Atom(tok.text)
        raise self._error("expected a formula")


def parse_formula(text: str) -> Formula:
    """Parse a single formula; raises ParseError with line/column on bad input."""
    return _Parser(_tokenize(text)).parse()


# --- printing --------------------------------------------------------------

def format_formula(f: Formula) -> str:
    """Render with the fewest parentheses that reparse to the same tree."""
    return _fmt(f, 0)


def _fmt(f: Formula, min_prec: int) -> str:
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Const):
        return "true" if f.value else "false"
    if isinstance(f, Not):
        return "~" + _fmt(f.operand, _NOT_PREC)
    sym, prec, assoc = _BINARY[type(f)]
    left = _fmt(f.left, prec if assoc == "left" else prec + 1)
    right = _fmt(f.right, prec + 1 if assoc == "left" else prec)
    text = f"{left} {sym} {right}"
    return f"({text})" if prec < min_prec else text


# --- structural helpers ----------------------------------------------------

def subformulas(f: Formula) -> Iterator[Formula]:
    """Yield f and every subformula, preorder."""
    yield f
    if isinstance(f, Not):
        yield from subformulas(f.operand)
    elif isinstance(f, (And, Or, Implies, Iff)):
        yield from subformulas(f.left)
        yield from subformulas(f.right)


def atoms_of(f: Formula) -> frozenset[str]:
    return frozenset(g.name for g in subformulas(f) if isinstance(g, Atom))


def connective_counts(f: Formula) -> dict[str, int]:
    """Occurrence counts of each connective, keyed not/and/or/implies/iff."""
    counts = {"not": 0, "and": 0, "or": 0, "implies": 0, "iff": 0}
    for g in subformulas(f):
        if isinstance(g, Not):
            counts["not"] += 1
        elif isinstance(g, And):
            counts["and"] += 1
        elif isinstance(g, Or):
            counts["or"] += 1
        elif isinstance(g, Implies):
            counts["implies"] += 1
        elif isinstance(g, Iff):
            counts["iff"] += 1
    return counts


def evaluate(f: Formula, assignment: Mapping[str, bool]) -> bool:
    """Truth value under a total assignment; KeyError on missing atoms."""
    if isinstance(f, Atom):
        return assignment[f.name]
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Not):
        return not evaluate(f.operand, assignment)
    if isinstance(f, And):
        return evaluate(f.left, assignment) and evaluate(f.right, assignment)
    if isinstance(f, Or):
        return evaluate(f.left, assignment) or evaluate(f.right, assignment)
    if isinstance(f, Implies):
        return (not evaluate(f.left, assignment)) or evaluate(f.right, assignment)
    if isinstance(f, Iff):
        return evaluate(f.left, assignment) == evaluate(f.right, assignment)
    raise TypeError(f"not a formula: {f!r}")
