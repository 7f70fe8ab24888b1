"""Discriminating queries built from the differing entailments of diagnoses.

The query vocabulary is deliberately small: positive literals, negative
literals, and atom-to-atom implications over the atoms of the ontology and
background. Applying a diagnosis yields a set of entailed vocabulary
sentences; intersections of those sets across diagnosis subsets produce
candidate queries, kept only when they split the leading diagnoses into a
nonempty "entails it" side (dp) and a nonempty "contradicts it" side (dn).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .diagnosis import Diagnosis, quickxplain
from .formulas import Atom, Formula, Implies, Not, format_formula
from .kb import KnowledgeBase
from . import sat

Sentence = Formula   # restricted to X, ~X, and X -> Y over ontology/background atoms

# Above this many atoms the bitmask truth tables get too wide; fall back to
# per-sentence DPLL checks.
TABLE_ATOM_CAP = 20


@dataclass(frozen=True)
class Query:
    sentences: tuple[Sentence, ...]          # sorted by rendered text
    dp: tuple[Diagnosis, ...]                # application entails all sentences
    dn: tuple[Diagnosis, ...]                # application contradicts them
    d0: tuple[Diagnosis, ...]                # neither

    @property
    def sentence_texts(self) -> tuple[str, ...]:
        return tuple(format_formula(s) for s in self.sentences)

    @property
    def sentence_key(self) -> frozenset[str]:
        return frozenset(self.sentence_texts)

    def partition_signature(self) -> tuple[frozenset, frozenset]:
        return (frozenset(d.axiom_ids for d in self.dp),
                frozenset(d.axiom_ids for d in self.dn))

    def leading(self) -> tuple[Diagnosis, ...]:
        return self.dp + self.dn + self.d0


def _sorted_sentences(sentences: Iterable[Sentence]) -> tuple[Sentence, ...]:
    return tuple(sorted(set(sentences), key=format_formula))


def _conjunction(sentences: Sequence[Sentence]) -> Formula:
    ordered = _sorted_sentences(sentences)
    conj = ordered[0]
    for s in ordered[1:]:
        from .formulas import And
        conj = And(conj, s)
    return conj


def query_conjunction(q: Query) -> Formula:
    """The single formula a yes/no answer commits to."""
    return _conjunction(q.sentences)


def vocabulary_atoms(kb: KnowledgeBase) -> tuple[str, ...]:
    out: set[str] = set()
    for ax in kb.ontology + kb.background:
        from .formulas import atoms_of
        out |= atoms_of(ax.formula)
    return tuple(sorted(out))


def _raw_vocabulary(kb: KnowledgeBase) -> list[Sentence]:
    atoms = vocabulary_atoms(kb)
    sentences: list[Sentence] = []
    for a in atoms:
        sentences.append(Atom(a))
        sentences.append(Not(Atom(a)))
    for a in atoms:
        for b in atoms:
            if a != b:
                sentences.append(Implies(Atom(a), Atom(b)))
    return sorted(sentences, key=format_formula)


# --- semantic truth tables ---------------------------------------------------

class _Universe:
    """Truth tables over a fixed atom tuple packed into Python ints: bit b of
    a table is the formula's value under assignment b (atom i true iff bit i
    of b is set). Set algebra on models is then plain integer bitwise ops."""

    def __init__(self, atoms: Sequence[str]):
        self.atoms = tuple(atoms)
        n = len(self.atoms)
        self.full = (1 << (1 << n)) - 1
        self._tables: dict[Formula, int] = {}
        total = 1 << n
        for i, name in enumerate(self.atoms):
            stride = 1 << i
            mask = ((1 << stride) - 1) << stride
            width = stride << 1
            while width < total:
                mask |= mask << width
                width <<= 1
            self._tables[Atom(name)] = mask

    def table(self, f: Formula) -> int:
        t = self._tables.get(f)
        if t is not None:
            return t
        from .formulas import And, Const, Iff, Implies as Imp, Not as Neg, Or
        if isinstance(f, Const):
            t = self.full if f.value else 0
        elif isinstance(f, Neg):
            t = self.full ^ self.table(f.operand)
        elif isinstance(f, And):
            t = self.table(f.left) & self.table(f.right)
        elif isinstance(f, Or):
            t = self.table(f.left) | self.table(f.right)
        elif isinstance(f, Imp):
            t = (self.full ^ self.table(f.left)) | self.table(f.right)
        elif isinstance(f, Iff):
            t = self.full ^ (self.table(f.left) ^ self.table(f.right))
        else:
            raise KeyError(f"atom {f!r} outside universe")
        self._tables[f] = t
        return t

    def models(self, formulas: Iterable[Formula]) -> int:
        m = self.full
        for f in formulas:
            m &= self.table(f)
        return m

    def entailed(self, models: int, f: Formula) -> bool:
        return models & (self.full ^ self.table(f)) == 0


class QueryEngine:
    """Per-(kb, leading) workspace: entailment sets, query generation,
    partitioning, and minimization, on the truth-table fast path when the
    atom universe is small enough and on the DPLL path otherwise."""

    def __init__(self, kb: KnowledgeBase, leading: Sequence[Diagnosis]):
        self.kb = kb
        self.leading = tuple(leading)
        self._universe: Optional[_Universe] = None
        self._models: list[int] = []
        self._base = tuple(ax.formula for ax in kb.background + kb.positive_tests)
        kb_atoms = sorted(kb.atoms())
        if len(kb_atoms) <= TABLE_ATOM_CAP:
            u = _Universe(kb_atoms)
            self._universe = u
            base_models = u.models(self._base)
            raw = _raw_vocabulary(kb)
            self.vocabulary = tuple(s for s in raw
                                    if not u.entailed(base_models, s))
            self._neg_tables = [u.table(ax.formula) for ax in kb.negative_tests]
            for d in self.leading:
                kept = kb.kept_ontology(d.axiom_ids)
                self._models.append(u.models(kept + self._base))
        else:
            raw = _raw_vocabulary(kb)
            self.vocabulary = tuple(s for s in raw if not sat.entails(self._base, s))
        self.entailments: list[frozenset[Sentence]] = [
            self._entailed_sentences(d) for d in self.leading]

    def _premises(self, d: Diagnosis) -> tuple[Formula, ...]:
        return self.kb.kept_ontology(d.axiom_ids) + self._base

    def _entailed_sentences(self, d: Diagnosis) -> frozenset[Sentence]:
        if self._universe is not None:
            u = self._universe
            m = u.models(self.kb.kept_ontology(d.axiom_ids) + self._base)
            return frozenset(s for s in self.vocabulary if u.entailed(m, s))
        premises = self._premises(d)
        return frozenset(s for s in self.vocabulary if sat.entails(premises, s))

    def classify(self, sentences: Sequence[Sentence], index: int) -> str:
        """Membership of leading[index] in dp/dn/d0 for these sentences."""
        if self._universe is not None:
            u = self._universe
            m = self._models[index]
            conj = u.models(sentences)
            if m & (u.full ^ conj) == 0:
                return "dp"
            joint = m & conj
            if joint == 0:
                return "dn"
            if any(joint & (u.full ^ t) == 0 for t in self._neg_tables):
                return "dn"
            return "d0"
        return classify_diagnosis(self.kb, sentences, self.leading[index])

    def partition(self, sentences: Sequence[Sentence]):
        buckets = {"dp": [], "dn": [], "d0": []}
        for i, d in enumerate(self.leading):
            buckets[self.classify(sentences, i)].append(d)
        return tuple(buckets["dp"]), tuple(buckets["dn"]), tuple(buckets["d0"])

    def generate(self) -> list[Query]:
        if len(self.leading) < 2:
            raise ValueError("need at least two leading diagnoses to discriminate")
        common = frozenset.intersection(*self.entailments)
        seen_sets: dict[frozenset[Sentence], None] = {}
        indices = range(len(self.leading))
        for size in range(1, len(self.leading)):
            for subset in combinations(indices, size):
                shared = frozenset.intersection(*(self.entailments[i] for i in subset))
                candidate = shared - common
                if candidate and candidate not in seen_sets:
                    seen_sets[candidate] = None
        queries: list[Query] = []
        seen_partitions: set[tuple[frozenset, frozenset]] = set()
        for sentence_set in seen_sets:
            ordered = _sorted_sentences(sentence_set)
            dp, dn, d0 = self.partition(ordered)
            if not dp or not dn:
                continue
            q = Query(ordered, dp, dn, d0)
            signature = q.partition_signature()
            if signature in seen_partitions:
                continue
            seen_partitions.add(signature)
            queries.append(q)
        return queries

    def minimize(self, q: Query) -> Query:
        if len(q.sentences) == 1:
            return q
        target = q.partition_signature()

        def holds(kept: Sequence[Sentence]) -> bool:
            if not kept:
                return False
            dp, dn, _ = self.partition(kept)
            return (frozenset(d.axiom_ids for d in dp),
                    frozenset(d.axiom_ids for d in dn)) == target

        core = quickxplain(list(q.sentences), holds)
        return Query(_sorted_sentences(core), q.dp, q.dn, q.d0)


# --- public operations -------------------------------------------------------

def diagnosis_entailments(kb: KnowledgeBase, d: Diagnosis) -> frozenset[Sentence]:
    """Vocabulary sentences entailed by applying d, minus anything the
    background and positive tests entail on their own."""
    premises = kb.kept_ontology(d.axiom_ids) + tuple(
        ax.formula for ax in kb.background + kb.positive_tests)
    if not sat.is_satisfiable(premises):
        raise ValueError("diagnosis application is inconsistent; not a valid candidate")
    engine = QueryEngine(kb, (d,))
    return engine.entailments[0]


def classify_diagnosis(kb: KnowledgeBase, sentences: Iterable[Sentence],
                       d: Diagnosis) -> str:
    """dp/dn/d0 membership via the DPLL route (the contract definition)."""
    sentences = list(sentences)
    premises = kb.kept_ontology(d.axiom_ids) + tuple(
        ax.formula for ax in kb.background + kb.positive_tests)
    if all(sat.entails(premises, s) for s in sentences):
        return "dp"
    joint = premises + tuple(sentences)
    if not sat.is_satisfiable(joint):
        return "dn"
    if any(sat.entails(joint, ax.formula) for ax in kb.negative_tests):
        return "dn"
    return "d0"


def partition(kb: KnowledgeBase, sentences: Iterable[Sentence],
              leading: Sequence[Diagnosis]):
    """Split leading diagnoses into (dp, dn, d0) for the given sentences."""
    sentences = list(sentences)
    if not sentences:
        raise ValueError("sentences must be nonempty")
    buckets = {"dp": [], "dn": [], "d0": []}
    for d in leading:
        buckets[classify_diagnosis(kb, sentences, d)].append(d)
    return tuple(buckets["dp"]), tuple(buckets["dn"]), tuple(buckets["d0"])


def generate_queries(kb: KnowledgeBase, leading: Sequence[Diagnosis]) -> list[Query]:
    """All partition-distinct discriminating queries, canonically ordered."""
    return QueryEngine(kb, leading).generate()


def minimize_query(kb: KnowledgeBase, q: Query) -> Query:
    """Smallest sentence subset inducing the identical partition."""
    return QueryEngine(kb, q.leading()).minimize(q)
