"""The sequential debugging loop, oracles, and the faulty-KB generator.

A session tracks leading minimal diagnoses and a belief distribution over
them. Each query's answer becomes a test case: "yes" adds the sentence
conjunction to the positive tests, "no" to the negative tests. Diagnoses are
recomputed against the accumulated tests after every answer; beliefs are the
prior times the replayed answer likelihoods, renormalized, which for
surviving diagnoses coincides with the incremental Bayes update and gives
newly surfaced diagnoses a well-defined mass.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .diagnosis import Diagnosis, DiagnosisProblem, leading_diagnoses
from .kb import Axiom, KnowledgeBase
from .queries import Query, QueryEngine, classify_diagnosis, query_conjunction
from .selection import (BeliefState, FaultModel, Strategy, diagnosis_priors,
                        select_query)

_LIKELIHOOD = {
    "yes": {"dp": 1.0, "dn": 0.0, "d0": 0.5},
    "no": {"dp": 0.0, "dn": 1.0, "d0": 0.5},
}


class SessionStatus(str, Enum):
    AWAITING_ANSWER = "AWAITING_ANSWER"
    FINISHED = "FINISHED"
    NO_DISCRIMINATING_QUERY = "NO_DISCRIMINATING_QUERY"


class InvalidState(RuntimeError):
    """Answer submitted to a session that is not awaiting one."""


@dataclass(frozen=True)
class AnsweredQuery:
    query: Query
    answer: str


@dataclass
class DebugSession:
    problem: DiagnosisProblem
    strategy: Strategy
    fault_model: FaultModel
    sigma: float
    history: list[AnsweredQuery] = field(default_factory=list)
    extra_positive: list[Axiom] = field(default_factory=list)
    extra_negative: list[Axiom] = field(default_factory=list)
    leading: list[Diagnosis] = field(default_factory=list)
    beliefs: Optional[BeliefState] = None
    status: SessionStatus = SessionStatus.AWAITING_ANSWER
    current_query: Optional[Query] = None
    _test_axioms: list[Axiom] = field(default_factory=list, repr=False)

    def effective_kb(self) -> KnowledgeBase:
        return self.problem.kb.with_tests(self.extra_positive, self.extra_negative)

    def ranked(self) -> list[tuple[Diagnosis, float]]:
        if self.beliefs is None:
            return []
        return self.beliefs.ranked()

    def final_diagnosis(self) -> Optional[Diagnosis]:
        ranked = self.ranked()
        if self.status is SessionStatus.FINISHED:
            return ranked[0][0] if ranked else Diagnosis(frozenset())
        return None

    def _kb_before(self, index: int) -> KnowledgeBase:
        """KB state as of history item `index` (tests added by earlier answers only)."""
        positive = [ax for item, ax in zip(self.history[:index], self._test_axioms[:index])
                    if item.answer == "yes"]
        negative = [ax for item, ax in zip(self.history[:index], self._test_axioms[:index])
                    if item.answer == "no"]
        return self.problem.kb.with_tests(positive, negative)


def start_session(kb: KnowledgeBase, strategy: Strategy,
                  fault_model: Optional[FaultModel] = None,
                  sigma: float = 0.95, max_leading: int = 9) -> DebugSession:
    """Compute the initial diagnoses and select the first query. Finishes
    immediately when zero (no fault) or one diagnosis exists."""
    if not 0.0 < sigma <= 1.0:
        raise ValueError(f"sigma must be in (0, 1], got {sigma}")
    problem = DiagnosisProblem(kb, max_leading)
    session = DebugSession(problem=problem, strategy=strategy,
                           fault_model=fault_model or FaultModel(), sigma=sigma)
    session.leading = leading_diagnoses(problem)
    if not session.leading:
        session.status = SessionStatus.FINISHED
        session.beliefs = None
        return session
    session.beliefs = _replayed_beliefs(session)
    if len(session.leading) == 1:
        session.status = SessionStatus.FINISHED
        return session
    _advance(session)
    return session


def submit_answer(session: DebugSession, answer: str) -> DebugSession:
    """Record the answer, fold it into the tests, update diagnoses and
    beliefs, then stop or select the next query."""
    if session.status is not SessionStatus.AWAITING_ANSWER:
        raise InvalidState(f"session is {session.status.value}, not awaiting an answer")
    answer = _normalize_answer(answer)
    query = session.current_query
    conj = query_conjunction(query)
    test_axiom = Axiom(session.effective_kb().fresh_id("q"), conj)
    session.history.append(AnsweredQuery(query, answer))
    session._test_axioms.append(test_axiom)
    if answer == "yes":
        session.extra_positive.append(test_axiom)
    else:
        session.extra_negative.append(test_axiom)
    session.current_query = None

    problem = DiagnosisProblem(session.effective_kb(), session.problem.max_leading)
    session.leading = leading_diagnoses(problem)
    session.beliefs = _replayed_beliefs(session)

    top_prob = session.beliefs.top()[1] if session.beliefs.probs else 0.0
    if top_prob >= session.sigma or len(session.leading) == 1:
        session.status = SessionStatus.FINISHED
        return session
    _advance(session)
    return session


def _normalize_answer(answer) -> str:
    value = answer.value if isinstance(answer, Enum) else str(answer).lower()
    if value not in ("yes", "no"):
        raise ValueError(f"answer must be 'yes' or 'no', got {answer!r}")
    return value


def _replayed_beliefs(session: DebugSession) -> BeliefState:
    """Prior times the likelihood of every answered query, renormalized over
    the current leading diagnoses. For diagnoses recorded in a query's
    partition the membership is reused; newly surfaced ones are classified
    against the KB state at the time each query was asked. For survivors this
    equals the incremental Bayes update."""
    priors = diagnosis_priors(session.leading, session.problem.kb, session.fault_model)
    masses: list[tuple[Diagnosis, float]] = []
    for d, prior in priors.probs:
        mass = prior
        for index, item in enumerate(session.history):
            mass *= _LIKELIHOOD[item.answer][_membership(session, item.query, d, index)]
        masses.append((d, mass))
    return BeliefState.from_masses(masses)


def _membership(session: DebugSession, query: Query, d: Diagnosis, index: int) -> str:
    if d in query.dp:
        return "dp"
    if d in query.dn:
        return "dn"
    if d in query.d0:
        return "d0"
    return classify_diagnosis(session._kb_before(index), query.sentences, d)


def _advance(session: DebugSession) -> None:
    """Select the next query, or close the session when none discriminates."""
    kb = session.effective_kb()
    engine = QueryEngine(kb, session.leading)
    asked = {item.query.sentence_key for item in session.history}
    pool = [q for q in engine.generate() if q.sentence_key not in asked]
    if not pool:
        session.status = SessionStatus.NO_DISCRIMINATING_QUERY
        return
    chosen = select_query(pool, session.beliefs, session.strategy)
    minimized = engine.minimize(chosen)
    if minimized.sentence_key in asked:
        minimized = chosen   # never expected; keep the un-minimized form
    session.current_query = minimized
    session.status = SessionStatus.AWAITING_ANSWER


# --- simulated sessions ------------------------------------------------------

@dataclass(frozen=True)
class TargetSpec:
    """The seeded fault: the axiom set whose removal (plus the extension
    axioms) yields the intended knowledge base."""
    target_diagnosis: frozenset[str]
    extension: tuple[Axiom, ...] = ()


@dataclass(frozen=True)
class TraceStep:
    query_sentences: tuple[str, ...]
    answer: str
    leading_after: tuple[tuple[str, ...], ...]
    beliefs_after: tuple[tuple[tuple[str, ...], float], ...]


@dataclass(frozen=True)
class SessionResult:
    final_diagnosis: Optional[Diagnosis]
    ranked: tuple[tuple[Diagnosis, float], ...]
    queries_asked: int
    correct: bool
    strategy: Strategy
    status: SessionStatus
    trace: Optional[tuple[TraceStep, ...]] = None


def simulated_oracle(kb: KnowledgeBase, target: TargetSpec):
    """Yes iff the intended KB (ontology minus the target diagnosis, plus
    background and extension) entails the conjunction of the query sentences."""
    from . import sat
    premises = kb.kept_ontology(target.target_diagnosis) + tuple(
        ax.formula for ax in kb.background) + tuple(
        ax.formula for ax in target.extension)

    def answer(query: Query) -> str:
        return "yes" if sat.entails(premises, query_conjunction(query)) else "no"

    return answer


def run_simulated(kb: KnowledgeBase, target: TargetSpec, strategy: Strategy,
                  fault_model: Optional[FaultModel] = None, sigma: float = 0.95,
                  seed: Optional[int] = None,
                  record_trace: bool = False) -> SessionResult:
    """Drive a session with the simulated oracle until it terminates."""
    from .diagnosis import is_valid_candidate
    if not is_valid_candidate(kb, target.target_diagnosis):
        raise ValueError("target is not a valid candidate of the knowledge base")
    if seed is not None and strategy.kind.value == "random":
        strategy = Strategy(strategy.kind, seed)
    else:
        strategy = strategy.reseed()
    oracle = simulated_oracle(kb, target)
    session = start_session(kb, strategy, fault_model, sigma)
    steps: list[TraceStep] = []
    while session.status is SessionStatus.AWAITING_ANSWER:
        query = session.current_query
        answer = oracle(query)
        submit_answer(session, answer)
        if record_trace:
            steps.append(TraceStep(
                query_sentences=query.sentence_texts,
                answer=answer,
                leading_after=tuple(d.sorted_ids for d in session.leading),
                beliefs_after=tuple((d.sorted_ids, p) for d, p in session.beliefs.probs),
            ))
    ranked = tuple(session.ranked())
    final = session.final_diagnosis()
    if session.status is SessionStatus.NO_DISCRIMINATING_QUERY and ranked:
        final = ranked[0][0]
    correct = final is not None and final.axiom_ids == target.target_diagnosis
    return SessionResult(
        final_diagnosis=final,
        ranked=ranked,
        queries_asked=len(session.history),
        correct=correct,
        strategy=strategy,
        status=session.status,
        trace=tuple(steps) if record_trace else None,
    )


# --- faulty-KB generator -----------------------------------------------------

def generate_faulty_kb(groups: int, group_size: int,
                       target_cardinality: Optional[int] = None,
                       atoms: int = 0, seed: int = 0) -> tuple[KnowledgeBase, TargetSpec]:
    """A KB with `groups` independent contradiction chains of `group_size`
    axioms each (so group_size**groups minimal diagnoses), padded with
    `atoms` satisfiable filler axioms. The target picks one axiom per group;
    a diagnosis must hit every chain, so target_cardinality must equal
    groups. Deterministic given the seed."""
    from .formulas import Atom, Implies, Not, parse_formula
    if groups < 1:
        raise ValueError("groups must be >= 1")
    if group_size < 2:
        raise ValueError("group_size must be >= 2")
    if target_cardinality is None:
        target_cardinality = groups
    if target_cardinality != groups:
        raise ValueError(
            f"target_cardinality must equal groups ({groups}); a diagnosis "
            f"must hit every conflict group")
    if atoms < 0:
        raise ValueError("atoms must be >= 0")
    rng = random.Random(seed)
    ontology: list[Axiom] = []
    target_ids: list[str] = []
    for g in range(1, groups + 1):
        chain = [f"A{g}"] + [f"X{g}_{i}" for i in range(1, group_size - 1)]
        group_ids: list[str] = []
        axiom_id = f"g{g}a1"
        ontology.append(Axiom(axiom_id, Atom(chain[0])))
        group_ids.append(axiom_id)
        for i in range(1, len(chain)):
            axiom_id = f"g{g}a{i + 1}"
            ontology.append(Axiom(axiom_id, Implies(Atom(chain[i - 1]), Atom(chain[i]))))
            group_ids.append(axiom_id)
        axiom_id = f"g{g}a{group_size}"
        ontology.append(Axiom(axiom_id, Not(Atom(chain[-1]))))
        group_ids.append(axiom_id)
        target_ids.append(rng.choice(group_ids))
    for i in range(1, atoms + 1):
        formula = parse_formula(f"Q{i}" if i == 1 else f"Q{i - 1} -> Q{i}")
        ontology.append(Axiom(f"f{i}", formula))
    kb = KnowledgeBase(ontology=tuple(ontology))
    return kb, TargetSpec(target_diagnosis=frozenset(target_ids))
