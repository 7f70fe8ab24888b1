"""Strategy benchmark over generated faulty knowledge bases.

Each run generates a KB plus target, builds a fault model for the chosen
prior regime, and drives every strategy against the identical oracle.
Regimes control whether the axiom-level priors favor the seeded target
(FAVORING), are indifferent (UNIFORM), or point away from it (MISLEADING).
"""

from __future__ import annotations

import io
import statistics
import time
from dataclasses import dataclass, field
from enum import Enum

from .kb import KnowledgeBase
from .selection import FaultModel, Strategy, StrategyKind
from .session import SessionResult, TargetSpec, generate_faulty_kb, run_simulated

ELEVATED_FAULT_PROB = 0.25
UNIFORM_FAULT_PROB = 0.1

CSV_HEADER = "run,strategy,regime,queries_asked,correct,wall_ms"


class PriorRegime(str, Enum):
    FAVORING = "favoring"
    UNIFORM = "uniform"
    MISLEADING = "misleading"


@dataclass(frozen=True)
class BenchmarkConfig:
    runs: int
    groups: int = 2
    group_size: int = 3
    filler_atoms: int = 0
    strategies: tuple[StrategyKind, ...] = (
        StrategyKind.ENTROPY, StrategyKind.SPLIT, StrategyKind.RANDOM)
    regime: PriorRegime = PriorRegime.UNIFORM
    seed: int = 0
    sigma: float = 0.95
    wall_clock: bool = True   # disable to make the CSV byte-reproducible

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError("runs must be >= 1")


@dataclass(frozen=True)
class BenchRow:
    run: int
    strategy: StrategyKind
    regime: PriorRegime
    queries_asked: int
    correct: bool
    wall_ms: float


@dataclass
class BenchmarkReport:
    config: BenchmarkConfig
    rows: list[BenchRow] = field(default_factory=list)

    def rows_for(self, strategy: StrategyKind) -> list[BenchRow]:
        return [r for r in self.rows if r.strategy is strategy]

    def mean_queries(self, strategy: StrategyKind) -> float:
        return statistics.fmean(r.queries_asked for r in self.rows_for(strategy))

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write(CSV_HEADER + "\n")
        for r in self.rows:
            out.write(f"{r.run},{r.strategy.value},{r.regime.value},"
                      f"{r.queries_asked},{str(r.correct).lower()},{r.wall_ms:.3f}\n")
        for label, agg in (("mean", statistics.fmean), ("median", statistics.median)):
            for strategy in self.config.strategies:
                rows = self.rows_for(strategy)
                queries = agg([float(r.queries_asked) for r in rows])
                correct = agg([1.0 if r.correct else 0.0 for r in rows])
                wall = agg([r.wall_ms for r in rows])
                out.write(f"{label},{strategy.value},{self.config.regime.value},"
                          f"{queries:.4f},{correct:.4f},{wall:.3f}\n")
        return out.getvalue()


def regime_fault_model(regime: PriorRegime, kb: KnowledgeBase,
                       target: TargetSpec) -> FaultModel:
    """Axiom-level prior assignment for a benchmark regime."""
    target_ids = target.target_diagnosis
    ontology_ids = kb.ontology_ids
    if regime is PriorRegime.UNIFORM:
        probs = {axiom_id: UNIFORM_FAULT_PROB for axiom_id in ontology_ids}
    elif regime is PriorRegime.FAVORING:
        probs = {axiom_id: ELEVATED_FAULT_PROB for axiom_id in target_ids}
    else:
        probs = {axiom_id: ELEVATED_FAULT_PROB
                 for axiom_id in ontology_ids if axiom_id not in target_ids}
    return FaultModel(axiom_probs=probs)


def run_benchmark(config: BenchmarkConfig) -> BenchmarkReport:
    report = BenchmarkReport(config=config)
    for run in range(1, config.runs + 1):
        run_seed = config.seed * 1_000_003 + run
        kb, target = generate_faulty_kb(config.groups, config.group_size,
                                        atoms=config.filler_atoms, seed=run_seed)
        fm = regime_fault_model(config.regime, kb, target)
        for kind in config.strategies:
            strategy = Strategy(kind, run_seed if kind is StrategyKind.RANDOM else None)
            started = time.perf_counter()
            result: SessionResult = run_simulated(
                kb, target, strategy, fm, sigma=config.sigma)
            elapsed_ms = (time.perf_counter() - started) * 1000.0
            report.rows.append(BenchRow(
                run=run, strategy=kind, regime=config.regime,
                queries_asked=result.queries_asked, correct=result.correct,
                wall_ms=elapsed_ms if config.wall_clock else 0.0))
    return report


def strategy_ratio_line(report: BenchmarkReport,
                        numerator: StrategyKind = StrategyKind.ENTROPY,
                        denominator: StrategyKind = StrategyKind.SPLIT) -> str:
    """Human-readable mean-queries ratio between two strategies."""
    strategies = {r.strategy for r in report.rows}
    if numerator not in strategies or denominator not in strategies:
        return f"{numerator.value}/{denominator.value} ratio: n/a"
    num = report.mean_queries(numerator)
    den = report.mean_queries(denominator)
    ratio = num / den if den else float("nan")
    return (f"{numerator.value}/{denominator.value} mean queries: "
            f"{num:.3f}/{den:.3f} = {ratio:.3f}")
