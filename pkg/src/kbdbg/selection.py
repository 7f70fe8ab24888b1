"""Fault probabilities, diagnosis beliefs, Bayesian updates, and the three
query-selection strategies (expected-entropy, split-in-half, random).

An axiom's fault probability combines a per-axiom baseline with
per-connective error beliefs: p(ax) = 1 - (1 - p_base) * prod_c (1 - p_c)^k_c
where k_c counts occurrences of connective c. Diagnosis priors multiply
fault probabilities over removed axioms and survival probabilities over kept
ones, then normalize over the leading diagnoses.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Optional, Sequence

from .diagnosis import Diagnosis
from .formulas import connective_counts
from .kb import Axiom, KnowledgeBase
from .queries import Query

ZERO_PROB_FLOOR = 1e-6
ENTROPY_TIE_TOLERANCE = 1e-9


class DegenerateModel(ValueError):
    """Every candidate diagnosis got zero unnormalized mass."""


class ZeroEvidence(ValueError):
    """An answer zeroed out every tracked diagnosis (inconsistent history)."""


class EmptyQueryPool(ValueError):
    pass


@dataclass(frozen=True)
class FaultModel:
    """Per-connective error beliefs plus a per-axiom baseline. The defaults
    encode that negation and implication are the error-prone constructs.
    ``axiom_probs`` pins specific axioms to a fixed fault probability,
    bypassing the connective formula (used by the benchmark prior regimes)."""

    p_not: float = 0.025
    p_and: float = 0.005
    p_or: float = 0.005
    p_implies: float = 0.015
    p_iff: float = 0.015
    p_base: float = 0.001
    axiom_probs: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        for name in ("p_not", "p_and", "p_or", "p_implies", "p_iff", "p_base"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {value}")
        for axiom_id, value in self.axiom_probs.items():
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"axiom_probs[{axiom_id!r}] must be in [0, 1]")

    def to_json_dict(self) -> dict:
        out = {name: getattr(self, name)
               for name in ("p_not", "p_and", "p_or", "p_implies", "p_iff", "p_base")}
        if self.axiom_probs:
            out["axiom_probs"] = dict(self.axiom_probs)
        return out

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "FaultModel":
        kwargs = {k: data[k] for k in
                  ("p_not", "p_and", "p_or", "p_implies", "p_iff", "p_base") if k in data}
        if "axiom_probs" in data:
            kwargs["axiom_probs"] = dict(data["axiom_probs"])
        return cls(**kwargs)


_CONNECTIVE_FIELDS = {"not": "p_not", "and": "p_and", "or": "p_or",
                      "implies": "p_implies", "iff": "p_iff"}


def axiom_fault_prob(ax: Axiom, fm: FaultModel) -> float:
    """Probability the axiom is faulty under the fault model."""
    pinned = fm.axiom_probs.get(ax.id)
    if pinned is not None:
        return pinned
    counts = connective_counts(ax.formula)
    p_ok = 1.0 - fm.p_base
    for connective, count in counts.items():
        if count:
            p_ok *= (1.0 - getattr(fm, _CONNECTIVE_FIELDS[connective])) ** count
    return 1.0 - p_ok


@dataclass(frozen=True)
class BeliefState:
    """Normalized probability distribution over the leading diagnoses,
    ordered deterministically (leading order at construction)."""

    probs: tuple[tuple[Diagnosis, float], ...]

    def __post_init__(self):
        if not self.probs:
            return
        total = 0.0
        for _, p in self.probs:
            if p < 0.0:
                raise ValueError("negative probability")
            total += p
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"probabilities sum to {total}, expected 1")

    @classmethod
    def from_masses(cls, pairs: Sequence[tuple[Diagnosis, float]]) -> "BeliefState":
        total = sum(p for _, p in pairs)
        if total <= 0.0:
            raise ValueError("total mass must be positive")
        return cls(tuple((d, p / total) for d, p in pairs))

    def prob(self, d: Diagnosis) -> float:
        for diagnosis, p in self.probs:
            if diagnosis == d:
                return p
        return 0.0

    @property
    def support(self) -> tuple[Diagnosis, ...]:
        return tuple(d for d, _ in self.probs)

    def ranked(self) -> list[tuple[Diagnosis, float]]:
        return sorted(self.probs, key=lambda item: (-item[1], item[0].sort_key))

    def top(self) -> tuple[Diagnosis, float]:
        return self.ranked()[0]

    def entropy(self) -> float:
        return -sum(p * math.log2(p) for _, p in self.probs if p > 0.0)


def diagnosis_priors(leading: Sequence[Diagnosis], kb: KnowledgeBase,
                     fm: FaultModel) -> BeliefState:
    """Prior over the leading diagnoses. Zero axiom fault probabilities are
    floored so no diagnosis is structurally impossible."""
    if not leading:
        raise ValueError("leading must be nonempty")
    p_ax: dict[str, float] = {}
    for ax in kb.ontology:
        p = axiom_fault_prob(ax, fm)
        p_ax[ax.id] = ZERO_PROB_FLOOR if p == 0.0 else p
    masses = []
    for d in leading:
        mass = 1.0
        for ax in kb.ontology:
            mass *= p_ax[ax.id] if ax.id in d.axiom_ids else 1.0 - p_ax[ax.id]
        masses.append((d, mass))
    if all(mass == 0.0 for _, mass in masses):
        raise DegenerateModel("all prior masses are zero")
    return BeliefState.from_masses(masses)


def answer_probability(q: Query, b: BeliefState) -> tuple[float, float]:
    """(p_yes, p_no); p_no is the exact complement."""
    covered = {d for d in q.dp} | {d for d in q.dn} | {d for d in q.d0}
    for d in b.support:
        if d not in covered:
            raise ValueError(f"query partition does not cover diagnosis {d.sorted_ids}")
    p_yes = sum(b.prob(d) for d in q.dp) + 0.5 * sum(b.prob(d) for d in q.d0)
    return p_yes, 1.0 - p_yes


_LIKELIHOOD = {
    "yes": {"dp": 1.0, "dn": 0.0, "d0": 0.5},
    "no": {"dp": 0.0, "dn": 1.0, "d0": 0.5},
}


def query_membership(q: Query, d: Diagnosis) -> str:
    if d in q.dp:
        return "dp"
    if d in q.dn:
        return "dn"
    if d in q.d0:
        return "d0"
    raise ValueError(f"diagnosis {d.sorted_ids} not in the query partition")


def bayes_update(b: BeliefState, q: Query, answer: str) -> BeliefState:
    """Posterior after an answer; zero-posterior diagnoses leave the support."""
    if answer not in _LIKELIHOOD:
        raise ValueError(f"answer must be 'yes' or 'no', got {answer!r}")
    table = _LIKELIHOOD[answer]
    masses = [(d, p * table[query_membership(q, d)]) for d, p in b.probs]
    alive = [(d, m) for d, m in masses if m > 0.0]
    if not alive:
        raise ZeroEvidence("answer eliminates every tracked diagnosis")
    return BeliefState.from_masses(alive)


def expected_entropy(q: Query, b: BeliefState) -> float:
    """Mean posterior entropy over the two answers, weighted by their
    predicted probabilities; zero-probability answers contribute nothing."""
    p_yes, p_no = answer_probability(q, b)
    score = 0.0
    for answer, p in (("yes", p_yes), ("no", p_no)):
        if p > 0.0:
            score += p * bayes_update(b, q, answer).entropy()
    return score


class StrategyKind(str, Enum):
    ENTROPY = "entropy"
    SPLIT = "split"
    RANDOM = "random"


@dataclass
class Strategy:
    """Query-selection policy. RANDOM owns a seeded generator whose state
    advances across picks, so a strategy instance is not shareable across
    concurrent sessions; reseed() gives a fresh replayable copy."""

    kind: StrategyKind
    seed: Optional[int] = None
    _rng: Optional[random.Random] = field(init=False, repr=False, compare=False, default=None)

    def __post_init__(self):
        self.kind = StrategyKind(self.kind)
        if self.kind is StrategyKind.RANDOM:
            if self.seed is None:
                raise ValueError("random strategy requires an explicit seed")
            self._rng = random.Random(self.seed)

    @classmethod
    def entropy(cls) -> "Strategy":
        return cls(StrategyKind.ENTROPY)

    @classmethod
    def split(cls) -> "Strategy":
        return cls(StrategyKind.SPLIT)

    @classmethod
    def random(cls, seed: int) -> "Strategy":
        return cls(StrategyKind.RANDOM, seed)

    def reseed(self) -> "Strategy":
        return Strategy(self.kind, self.seed)

    def to_json_dict(self) -> dict:
        return {"kind": self.kind.value, "seed": self.seed}

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "Strategy":
        return cls(StrategyKind(data["kind"]), data.get("seed"))


def _tie_key(q: Query) -> tuple[int, tuple[str, ...]]:
    return (len(q.sentences), q.sentence_texts)


def split_score(q: Query) -> int:
    return abs(len(q.dp) - len(q.dn)) + len(q.d0)


def select_query(queries: Sequence[Query], b: BeliefState, strategy: Strategy) -> Query:
    """Pick one query: ENTROPY minimizes expected entropy (1e-9 tie band),
    SPLIT minimizes | |dp|-|dn| | + |d0|, RANDOM draws uniformly with the
    strategy's generator. Ties break on fewer sentences, then sentence text."""
    if not queries:
        raise EmptyQueryPool("no queries to select from")
    if strategy.kind is StrategyKind.RANDOM:
        return queries[strategy._rng.randrange(len(queries))]
    if strategy.kind is StrategyKind.ENTROPY:
        scored = [(expected_entropy(q, b), q) for q in queries]
        best = min(score for score, _ in scored)
        candidates = [q for score, q in scored if score - best <= ENTROPY_TIE_TOLERANCE]
    else:
        scored = [(split_score(q), q) for q in queries]
        best = min(score for score, _ in scored)
        candidates = [q for score, q in scored if score == best]
    return min(candidates, key=_tie_key)
