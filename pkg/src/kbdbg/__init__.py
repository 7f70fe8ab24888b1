"""kbdbg: interactive sequential debugger for propositional knowledge bases."""

from .formulas import (And, Atom, Const, FALSE, Formula, Iff, Implies, Not, Or,
                       ParseError, TRUE, atoms_of, connective_counts, evaluate,
                       format_formula, parse_formula)
from .kb import (Axiom, DuplicateAxiomId, KbFormatError, KnowledgeBase,
                 UnknownAxiomId, format_kb, parse_kb)
from .sat import ClauseSet, CnfEncoder, entails, is_satisfiable, solve, to_cnf
from .diagnosis import (CandidateChecker, Conflict, Diagnosis, DiagnosisProblem,
                        InfeasibleProblem, OntologyTooLarge, brute_force_diagnoses,
                        is_valid_candidate, leading_diagnoses, minimal_conflict,
                        quickxplain)
from .queries import (Query, QueryEngine, Sentence, diagnosis_entailments,
                      generate_queries, minimize_query, partition,
                      query_conjunction)
from .selection import (BeliefState, DegenerateModel, EmptyQueryPool, FaultModel,
                        Strategy, StrategyKind, ZeroEvidence, answer_probability,
                        axiom_fault_prob, bayes_update, diagnosis_priors,
                        expected_entropy, select_query, split_score)
from .session import (AnsweredQuery, DebugSession, InvalidState, SessionResult,
                      SessionStatus, TargetSpec, TraceStep, generate_faulty_kb,
                      run_simulated, simulated_oracle, start_session,
                      submit_answer)
from .benchmark import (BenchRow, BenchmarkConfig, BenchmarkReport, PriorRegime,
                        regime_fault_model, run_benchmark, strategy_ratio_line)

__version__ = "0.1.0"
