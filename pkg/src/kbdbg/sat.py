"""Structural CNF conversion and a DPLL satisfiability core.

Clauses are tuples of nonzero ints: positive literal = variable index,
negative = its complement. Conversion is Tseitin-style with hash-consed
definition variables, so clause count stays linear in formula size;
top-level conjunctions are split instead of getting a definition variable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .formulas import And, Atom, Const, Formula, Iff, Implies, Not, Or, format_formula

Clause = tuple[int, ...]


@dataclass
class ClauseSet:
    clauses: list[Clause]
    atom_index: dict[str, int]   # source atoms only
    names: dict[int, str]        # every variable, including _true/_aux*
    n_vars: int


class CnfEncoder:
    """Reusable encoder: definitions are shared across calls, so encoding the
    same axiom set under different removals costs one traversal total."""

    def __init__(self):
        self._atom_index: dict[str, int] = {}
        self._names: dict[int, str] = {}
        self._n = 0
        self._literal: dict[Formula, int] = {}
        self._defs: dict[Formula, tuple[Clause, ...]] = {}
        self._true_var: int | None = None

    @property
    def n_vars(self) -> int:
        return self._n

    @property
    def atom_index(self) -> dict[str, int]:
        return self._atom_index

    @property
    def names(self) -> dict[int, str]:
        return self._names

    def _alloc(self, name: str) -> int:
        self._n += 1
        self._names[self._n] = name
        return self._n

    def atom_var(self, name: str) -> int:
        var = self._atom_index.get(name)
        if var is None:
            var = self._alloc(name)
            self._atom_index[name] = var
        return var

    def _true(self) -> int:
        if self._true_var is None:
            self._true_var = self._alloc("_true")
        return self._true_var

    def definition(self, f: Formula) -> tuple[tuple[Clause, ...], int]:
        """(defining clauses, literal) such that the literal is equivalent to f
        whenever the defining clauses hold."""
        lit = self._encode(f)
        return self._defs_of(f), lit

    def assertion(self, f: Formula) -> tuple[Clause, ...]:
        """Clauses asserting f, splitting top-level conjunctions."""
        clauses: list[Clause] = []
        for conjunct in _conjuncts(f):
            defs, lit = self.definition(conjunct)
            clauses.extend(defs)
            clauses.append((lit,))
        return tuple(dict.fromkeys(clauses))

    def _encode(self, f: Formula) -> int:
        if isinstance(f, Atom):
            return self.atom_var(f.name)
        if isinstance(f, Const):
            t = self._true()
            return t if f.value else -t
        if isinstance(f, Not):
            return -self._encode(f.operand)
        lit = self._literal.get(f)
        if lit is not None:
            return lit
        a = self._encode(f.left)
        b = self._encode(f.right)
        v = self._alloc(f"_aux{self._n + 1}")
        if isinstance(f, And):
            own = ((-v, a), (-v, b), (v, -a, -b))
        elif isinstance(f, Or):
            own = ((-v, a, b), (v, -a), (v, -b))
        elif isinstance(f, Implies):
            own = ((-v, -a, b), (v, a), (v, -b))
        elif isinstance(f, Iff):
            own = ((-v, -a, b), (-v, a, -b), (v, a, b), (v, -a, -b))
        else:
            raise TypeError(f"not a formula: {f!r}")
        self._literal[f] = v
        self._defs[f] = tuple(dict.fromkeys(
            self._defs_of(f.left) + self._defs_of(f.right) + own))
        return v

    def _defs_of(self, f: Formula) -> tuple[Clause, ...]:
        if isinstance(f, Atom):
            return ()
        if isinstance(f, Const):
            return ((self._true(),),)
        if isinstance(f, Not):
            return self._defs_of(f.operand)
        return self._defs[f]


def _conjuncts(f: Formula):
    if isinstance(f, And):
        yield from _conjuncts(f.left)
        yield from _conjuncts(f.right)
    else:
        yield f


def _canonical(formulas: Iterable[Formula]) -> list[Formula]:
    return sorted(set(formulas), key=format_formula)


def to_cnf(formulas: Iterable[Formula]) -> ClauseSet:
    """Equisatisfiable clause set for the conjunction of the given formulas."""
    enc = CnfEncoder()
    clauses: list[Clause] = []
    for f in _canonical(formulas):
        clauses.extend(enc.assertion(f))
    return ClauseSet(list(dict.fromkeys(clauses)), dict(enc.atom_index),
                     dict(enc.names), enc.n_vars)


# --- DPLL ------------------------------------------------------------------

def solve_clauses(clauses: Iterable[Clause]) -> Optional[dict[int, bool]]:
    """DPLL with unit propagation and highest-occurrence branching.
    Returns a (possibly partial) satisfying assignment, or None."""
    return _search(list(clauses), {})


def _search(clauses: list[Clause], assignment: dict[int, bool]) -> Optional[dict[int, bool]]:
    # unit propagation to fixpoint
    while True:
        unit = None
        for c in clauses:
            if not c:
                return None
            if len(c) == 1:
                unit = c[0]
                break
        if unit is None:
            break
        assignment[abs(unit)] = unit > 0
        clauses = _assign(clauses, unit)
        if clauses is None:
            return None
    if not clauses:
        return assignment
    counts: dict[int, int] = {}
    for c in clauses:
        for lit in c:
            v = abs(lit)
            counts[v] = counts.get(v, 0) + 1
    var = min(counts, key=lambda v: (-counts[v], v))
    for value in (True, False):
        reduced = _assign(clauses, var if value else -var)
        if reduced is not None:
            result = _search(reduced, {**assignment, var: value})
            if result is not None:
                return result
    return None


def _assign(clauses: list[Clause], lit: int) -> Optional[list[Clause]]:
    """Simplify under lit=true; None if an empty clause appears."""
    out: list[Clause] = []
    neg = -lit
    for c in clauses:
        if lit in c:
            continue
        if neg in c:
            reduced = tuple(l for l in c if l != neg)
            if not reduced:
                return None
            out.append(reduced)
        else:
            out.append(c)
    return out


# --- public satisfiability API ----------------------------------------------

def solve(formulas: Iterable[Formula]) -> Optional[dict[str, bool]]:
    """Satisfying assignment over the source atoms, or None when unsatisfiable.
    Atoms the search never had to fix default to False."""
    cs = to_cnf(formulas)
    model = solve_clauses(cs.clauses)
    if model is None:
        return None
    return {name: model.get(var, False) for name, var in cs.atom_index.items()}


def is_satisfiable(formulas: Iterable[Formula]) -> bool:
    return solve(formulas) is not None


def entails(premises: Iterable[Formula], goal: Formula) -> bool:
    """premises ⊨ goal, i.e. premises plus the negated goal are unsatisfiable."""
    enc = CnfEncoder()
    clauses: list[Clause] = []
    for f in _canonical(premises):
        clauses.extend(enc.assertion(f))
    defs, lit = enc.definition(goal)
    clauses.extend(defs)
    clauses.append((-lit,))
    return solve_clauses(dict.fromkeys(clauses)) is None
