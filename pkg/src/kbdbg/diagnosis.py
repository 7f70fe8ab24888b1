"""Minimal conflicts and leading minimal diagnoses.

A removal set is a *valid candidate* when the kept ontology together with
background and positive tests is satisfiable and entails no negative test.
Minimal conflicts come from a QuickXplain-style divide and conquer; leading
diagnoses from a breadth-first hitting-set tree over conflicts computed on
demand and reused across branches.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Optional, Sequence, TypeVar

from .kb import KnowledgeBase, UnknownAxiomId
from .sat import Clause, CnfEncoder, solve_clauses

T = TypeVar("T")


class InfeasibleProblem(Exception):
    """Background plus positive tests already violate the requirements;
    no removal of ontology axioms can help."""


class OntologyTooLarge(ValueError):
    """Ontology exceeds the brute-force enumeration guard."""


@dataclass(frozen=True)
class Conflict:
    axiom_ids: frozenset[str]

    @property
    def sorted_ids(self) -> tuple[str, ...]:
        return tuple(sorted(self.axiom_ids))


@dataclass(frozen=True)
class Diagnosis:
    axiom_ids: frozenset[str]

    @property
    def sorted_ids(self) -> tuple[str, ...]:
        return tuple(sorted(self.axiom_ids))

    @property
    def sort_key(self) -> tuple[int, tuple[str, ...]]:
        return (len(self.axiom_ids), self.sorted_ids)


@dataclass(frozen=True)
class DiagnosisProblem:
    kb: KnowledgeBase
    max_leading: int = 9

    def __post_init__(self):
        if self.max_leading < 2:
            raise ValueError("max_leading must be at least 2")


class CandidateChecker:
    """Validity oracle for one knowledge base.

    Axioms are CNF-encoded once; each query unions precomputed clause groups,
    so repeated checks over different removals stay cheap. Results are
    memoized per removal set.
    """

    def __init__(self, kb: KnowledgeBase):
        self.kb = kb
        enc = CnfEncoder()
        self._ontology_clauses = {ax.id: enc.assertion(ax.formula) for ax in kb.ontology}
        static: list[Clause] = []
        for ax in kb.background + kb.positive_tests:
            static.extend(enc.assertion(ax.formula))
        self._static = tuple(dict.fromkeys(static))
        self._negatives = []
        for ax in kb.negative_tests:
            defs, lit = enc.definition(ax.formula)
            self._negatives.append((defs, lit))
        self._ontology_ids = frozenset(kb.ontology_ids)
        self._cache: dict[frozenset[str], bool] = {}

    def is_valid(self, removal: Iterable[str]) -> bool:
        removal = frozenset(removal)
        unknown = removal - self._ontology_ids
        if unknown:
            raise UnknownAxiomId(min(unknown))
        cached = self._cache.get(removal)
        if cached is not None:
            return cached
        kept: dict[Clause, None] = dict.fromkeys(self._static)
        for ax in self.kb.ontology:
            if ax.id not in removal:
                kept.update(dict.fromkeys(self._ontology_clauses[ax.id]))
        base = list(kept)
        valid = solve_clauses(base) is not None
        if valid:
            for defs, lit in self._negatives:
                query = dict.fromkeys(base)
                query.update(dict.fromkeys(defs))
                query[(-lit,)] = None
                if solve_clauses(query) is None:
                    valid = False   # negative test entailed
                    break
        self._cache[removal] = valid
        return valid

    def ensure_feasible(self) -> None:
        if not self.is_valid(self._ontology_ids):
            raise InfeasibleProblem(
                "background and positive tests violate the requirements on their own")


@lru_cache(maxsize=128)
def _checker_for(kb: KnowledgeBase) -> CandidateChecker:
    return CandidateChecker(kb)


def is_valid_candidate(kb: KnowledgeBase, removal: Iterable[str]) -> bool:
    """True iff removing the given ontology axioms restores all requirements."""
    return _checker_for(kb).is_valid(removal)


def quickxplain(items: Sequence[T], holds: Callable[[Sequence[T]], bool]) -> list[T]:
    """Preferred minimal sub-sequence S of items with holds(S).

    Requires holds(items) and upward monotonicity within subsets of items.
    Preference follows the given order: earlier items are kept when possible.
    """
    items = list(items)
    if not holds(items):
        raise ValueError("holds(items) must be true")
    if holds([]):
        return []
    return _qx([], items, False, holds)


def _qx(base: list[T], items: list[T], base_may_suffice: bool,
        holds: Callable[[Sequence[T]], bool]) -> list[T]:
    if base_may_suffice and holds(base):
        return []
    if len(items) == 1:
        return list(items)
    mid = len(items) // 2
    left, right = items[:mid], items[mid:]
    d2 = _qx(base + left, right, True, holds)
    d1 = _qx(base + d2, left, bool(d2), holds)
    return d1 + d2


def minimal_conflict(kb: KnowledgeBase, candidates: Sequence[str]) -> Optional[Conflict]:
    """Minimal subset of candidates that violates the requirements when kept
    (every other ontology axiom removed); None when keeping all candidates
    is valid. Deterministic in the candidate order."""
    checker = _checker_for(kb)
    ontology_ids = frozenset(kb.ontology_ids)
    ordered = list(dict.fromkeys(candidates))
    unknown = set(ordered) - ontology_ids
    if unknown:
        raise UnknownAxiomId(min(unknown))

    def invalid_keeping(kept: Sequence[str]) -> bool:
        return not checker.is_valid(ontology_ids - set(kept))

    if not invalid_keeping(ordered):
        return None
    if invalid_keeping(()):
        raise InfeasibleProblem(
            "background and positive tests violate the requirements on their own")
    return Conflict(frozenset(quickxplain(ordered, invalid_keeping)))


def leading_diagnoses(problem: DiagnosisProblem,
                      conflicts_out: Optional[list[Conflict]] = None) -> list[Diagnosis]:
    """Up to max_leading minimal diagnoses, nondecreasing cardinality, then
    lexicographic by sorted ids. Empty list when the KB already satisfies
    all requirements."""
    kb = problem.kb
    order = list(kb.ontology_ids)
    pool: list[Conflict] = []
    by_path: dict[frozenset[str], Optional[Conflict]] = {}

    def conflict_for(path: frozenset[str]) -> Optional[Conflict]:
        if path in by_path:
            return by_path[path]
        found: Optional[Conflict] = None
        for c in pool:
            if not (c.axiom_ids & path):
                found = c
                break
        if found is None:
            found = minimal_conflict(kb, [i for i in order if i not in path])
            if found is not None:
                pool.append(found)
                if conflicts_out is not None:
                    conflicts_out.append(found)
        by_path[path] = found
        return found

    root = frozenset()
    if conflict_for(root) is None:
        return []

    found_diagnoses: list[Diagnosis] = []
    level: list[frozenset[str]] = [root]
    seen: set[frozenset[str]] = {root}
    while level and len(found_diagnoses) < problem.max_leading:
        next_level: list[frozenset[str]] = []
        level_hits: list[frozenset[str]] = []
        for path in level:
            if any(d.axiom_ids <= path for d in found_diagnoses):
                continue   # closed: already covers a smaller diagnosis
            conflict = conflict_for(path)
            if conflict is None:
                level_hits.append(path)
                continue
            for ax in conflict.sorted_ids:
                child = path | {ax}
                if child not in seen:
                    seen.add(child)
                    next_level.append(child)
        for path in sorted(level_hits, key=lambda p: tuple(sorted(p))):
            found_diagnoses.append(Diagnosis(path))
        level = next_level
    return found_diagnoses[:problem.max_leading]


_BRUTE_FORCE_GUARD = 14


def brute_force_diagnoses(kb: KnowledgeBase) -> set[Diagnosis]:
    """All minimal valid removals by subset enumeration; independent search
    path used as a test oracle for the hitting-set tree. Empty set means the
    KB is fault-free."""
    from itertools import combinations

    ids = kb.ontology_ids
    if len(ids) > _BRUTE_FORCE_GUARD:
        raise OntologyTooLarge(
            f"|ontology| = {len(ids)} exceeds the enumeration guard {_BRUTE_FORCE_GUARD}")
    checker = _checker_for(kb)
    checker.ensure_feasible()
    if checker.is_valid(frozenset()):
        return set()
    found: list[frozenset[str]] = []
    for size in range(1, len(ids) + 1):
        for combo in combinations(ids, size):
            candidate = frozenset(combo)
            if any(d <= candidate for d in found):
                continue
            if checker.is_valid(candidate):
                found.append(candidate)
    return {Diagnosis(d) for d in found}
