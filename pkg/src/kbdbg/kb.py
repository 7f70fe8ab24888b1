"""Knowledge bases: named axioms in four sections plus the text file format.

Sections: ``[ontology]`` (fixable axioms), ``[background]`` (trusted),
``[positive]`` / ``[negative]`` (test sentences the intended knowledge base
must / must not entail). Lines are ``id: formula``; ``#`` starts a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from typing import Iterable

from .formulas import Formula, ParseError, atoms_of, format_formula, parse_formula

_ID_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

_SECTIONS = {
    "[ontology]": "ontology",
    "[background]": "background",
    "[positive]": "positive_tests",
    "[negative]": "negative_tests",
}


class KbFormatError(ValueError):
    """Structural problem in KB text (bad section, bad line shape)."""

    def __init__(self, message: str, line: int = 0):
        suffix = f" (line {line})" if line else ""
        super().__init__(message + suffix)
        self.line = line


class DuplicateAxiomId(KbFormatError):
    def __init__(self, axiom_id: str, line: int = 0):
        super().__init__(f"duplicate axiom id {axiom_id!r}", line)
        self.axiom_id = axiom_id


class UnknownAxiomId(KeyError):
    def __init__(self, axiom_id: str):
        super().__init__(axiom_id)
        self.axiom_id = axiom_id

    def __str__(self):
        return f"unknown axiom id {self.axiom_id!r}"


@dataclass(frozen=True)
class Axiom:
    id: str
    formula: Formula

    def __post_init__(self):
        if not _ID_RE.match(self.id):
            raise ValueError(f"invalid axiom id {self.id!r}")


@dataclass(frozen=True)
class KnowledgeBase:
    ontology: tuple[Axiom, ...] = ()
    background: tuple[Axiom, ...] = ()
    positive_tests: tuple[Axiom, ...] = ()
    negative_tests: tuple[Axiom, ...] = ()
    _by_id: dict = field(init=False, repr=False, compare=False, hash=False, default=None)

    def __post_init__(self):
        by_id = {}
        for ax in self.all_axioms():
            if ax.id in by_id:
                raise DuplicateAxiomId(ax.id)
            by_id[ax.id] = ax
        object.__setattr__(self, "_by_id", by_id)

    def all_axioms(self) -> tuple[Axiom, ...]:
        return self.ontology + self.background + self.positive_tests + self.negative_tests

    @property
    def ontology_ids(self) -> tuple[str, ...]:
        return tuple(ax.id for ax in self.ontology)

    def axiom(self, axiom_id: str) -> Axiom:
        try:
            return self._by_id[axiom_id]
        except KeyError:
            raise UnknownAxiomId(axiom_id) from None

    def atoms(self) -> frozenset[str]:
        out: set[str] = set()
        for ax in self.all_axioms():
            out |= atoms_of(ax.formula)
        return frozenset(out)

    def kept_ontology(self, removal: Iterable[str]) -> tuple[Formula, ...]:
        """Ontology formulas that survive removing the given axiom ids."""
        gone = set(removal)
        for axiom_id in gone:
            self.axiom(axiom_id)
        return tuple(ax.formula for ax in self.ontology if ax.id not in gone)

    def with_tests(self, positive: Iterable[Axiom] = (), negative: Iterable[Axiom] = ()) -> "KnowledgeBase":
        """A copy with extra positive/negative test axioms appended."""
        return replace(
            self,
            positive_tests=self.positive_tests + tuple(positive),
            negative_tests=self.negative_tests + tuple(negative),
        )

    def fresh_id(self, prefix: str) -> str:
        n = 1
        while f"{prefix}{n}" in self._by_id:
            n += 1
        return f"{prefix}{n}"


def parse_kb(text: str) -> KnowledgeBase:
    """Parse the KB file format. Missing sections default to empty."""
    sections: dict[str, list[Axiom]] = {name: [] for name in _SECTIONS.values()}
    seen_ids: set[str] = set()
    current: str | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("["):
            try:
                current = _SECTIONS[stripped]
            except KeyError:
                raise KbFormatError(f"unknown section header {stripped!r}", lineno) from None
            continue
        if current is None:
            raise KbFormatError("axiom line before any section header", lineno)
        ident, sep, rhs = line.partition(":")
        if not sep:
            raise KbFormatError("expected 'id: formula'", lineno)
        axiom_id = ident.strip()
        if not _ID_RE.match(axiom_id):
            raise KbFormatError(f"invalid axiom id {axiom_id!r}", lineno)
        if axiom_id in seen_ids:
            raise DuplicateAxiomId(axiom_id, lineno)
        seen_ids.add(axiom_id)
        try:
            formula = parse_formula(rhs)
        except ParseError as exc:
            raise ParseError(exc.bare_message, lineno, exc.column + len(ident) + 1) from None
        sections[current].append(Axiom(axiom_id, formula))
    return KnowledgeBase(
        ontology=tuple(sections["ontology"]),
        background=tuple(sections["background"]),
        positive_tests=tuple(sections["positive_tests"]),
        negative_tests=tuple(sections["negative_tests"]),
    )


def format_kb(kb: KnowledgeBase) -> str:
    """Render back to the file format, skipping empty sections."""
    lines: list[str] = []
    for header, attr in _SECTIONS.items():
        axioms = getattr(kb, attr)
        if not axioms:
            continue
        if lines:
            lines.append("")
        lines.append(header)
        for ax in axioms:
            lines.append(f"{ax.id}: {format_formula(ax.formula)}")
    return "\n".join(lines) + ("\n" if lines else "")
