"""Command-line entry points.

Exit codes: 0 success, 1 usage error, 2 parse error or infeasible problem.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from .benchmark import BenchmarkConfig, PriorRegime, run_benchmark, strategy_ratio_line
from .diagnosis import (Diagnosis, DiagnosisProblem, InfeasibleProblem,
                        OntologyTooLarge, is_valid_candidate, leading_diagnoses,
                        minimal_conflict)
from .formulas import ParseError
from .kb import KbFormatError, UnknownAxiomId, parse_kb
from .selection import Strategy, StrategyKind
from .session import (SessionStatus, TargetSpec, run_simulated, start_session,
                      submit_answer)

_STRATEGY_CHOICES = click.Choice([k.value for k in StrategyKind])


def _load_kb(path: str):
    return parse_kb(Path(path).read_text())


def _make_strategy(name: str, seed: int | None) -> Strategy:
    kind = StrategyKind(name)
    if kind is StrategyKind.RANDOM:
        return Strategy(kind, seed if seed is not None else 0)
    return Strategy(kind, seed)


def _print_ranked(session) -> None:
    for d, p in session.ranked():
        ids = ", ".join(d.sorted_ids) or "(no fault)"
        click.echo(f"  {p:7.2%}  {{{ids}}}")


@click.group()
def cli():
    """Interactive debugger for propositional knowledge bases."""


@cli.command()
@click.argument("kb_file", type=click.Path(exists=True, dir_okay=False))
def check(kb_file):
    """Report whether a KB satisfies its requirements."""
    kb = _load_kb(kb_file)
    conflict = minimal_conflict(kb, kb.ontology_ids)
    if conflict is None:
        click.echo("ok: all requirements satisfied")
    else:
        ids = ", ".join(conflict.sorted_ids)
        click.echo(f"faulty: minimal conflict {{{ids}}}")


@cli.command()
@click.argument("kb_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--n", default=9, show_default=True, help="Leading diagnoses to compute.")
def diagnose(kb_file, n):
    """Print the leading minimal diagnoses."""
    kb = _load_kb(kb_file)
    diagnoses = leading_diagnoses(DiagnosisProblem(kb, n))
    if not diagnoses:
        click.echo("no fault: the knowledge base satisfies all requirements")
        return
    for d in diagnoses:
        click.echo("{" + ", ".join(d.sorted_ids) + "}")


@cli.command()
@click.argument("kb_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--strategy", default="entropy", type=_STRATEGY_CHOICES, show_default=True)
@click.option("--sigma", default=0.95, show_default=True)
@click.option("--seed", default=None, type=int, help="Seed for the random strategy.")
@click.option("--n", default=9, show_default=True, help="Leading diagnoses cap.")
def debug(kb_file, strategy, sigma, seed, n):
    """Interactive debugging loop: answer yes/no queries until convergence."""
    kb = _load_kb(kb_file)
    session = start_session(kb, _make_strategy(strategy, seed), sigma=sigma, max_leading=n)
    while session.status is SessionStatus.AWAITING_ANSWER:
        click.echo(f"\nquery {len(session.history) + 1} — should the intended KB entail:")
        for text in session.current_query.sentence_texts:
            click.echo(f"    {text}")
        answer = click.prompt("answer", type=click.Choice(["y", "n"]))
        submit_answer(session, "yes" if answer == "y" else "no")
        click.echo("current ranking:")
        _print_ranked(session)
    click.echo(f"\n{session.status.value}")
    if session.status is SessionStatus.FINISHED:
        final = session.final_diagnosis()
        ids = ", ".join(final.sorted_ids) or "(no fault)"
        click.echo(f"diagnosis: {{{ids}}} after {len(session.history)} queries")
    else:
        click.echo("remaining candidates:")
        _print_ranked(session)


@cli.command()
@click.option("--kb", "kb_file", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--target", required=True, help="Comma-separated axiom ids, e.g. a1,a4.")
@click.option("--ext", "ext_file", default=None, type=click.Path(exists=True, dir_okay=False),
              help="KB-format file whose axioms extend the intended KB.")
@click.option("--strategy", default="entropy", type=_STRATEGY_CHOICES, show_default=True)
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--sigma", default=0.95, show_default=True)
def simulate(kb_file, target, ext_file, strategy, seed, sigma):
    """Run a session against a simulated oracle for a known target diagnosis."""
    kb = _load_kb(kb_file)
    extension = ()
    if ext_file is not None:
        ext_kb = _load_kb(ext_file)
        extension = ext_kb.all_axioms()
    spec = TargetSpec(frozenset(t.strip() for t in target.split(",") if t.strip()),
                      extension)
    for axiom_id in spec.target_diagnosis:
        kb.axiom(axiom_id)
    try:
        result = run_simulated(kb, spec, _make_strategy(strategy, seed),
                               sigma=sigma, seed=seed)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    click.echo(f"status: {result.status.value}")
    click.echo(f"queries asked: {result.queries_asked}")
    click.echo(f"correct: {str(result.correct).lower()}")
    if result.final_diagnosis is not None:
        click.echo("final diagnosis: {" + ", ".join(result.final_diagnosis.sorted_ids) + "}")


@cli.command()
@click.option("--runs", default=30, show_default=True, type=int)
@click.option("--groups", default=2, show_default=True, type=int)
@click.option("--group-size", default=3, show_default=True, type=int)
@click.option("--atoms", default=0, show_default=True, type=int,
              help="Satisfiable filler axioms added to each generated KB.")
@click.option("--regime", default="uniform",
              type=click.Choice([r.value for r in PriorRegime]), show_default=True)
@click.option("--strategies", default="entropy,split,random", show_default=True)
@click.option("--sigma", default=0.95, show_default=True)
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--out", default="results.csv", show_default=True,
              type=click.Path(dir_okay=False, writable=True))
@click.option("--no-wall-clock", is_flag=True,
              help="Write wall_ms as 0 for byte-reproducible output.")
def bench(runs, groups, group_size, atoms, regime, strategies, sigma, seed, out,
          no_wall_clock):
    """Benchmark strategies on generated faulty KBs; write CSV results."""
    try:
        kinds = tuple(StrategyKind(s.strip()) for s in strategies.split(",") if s.strip())
    except ValueError as exc:
        raise click.UsageError(str(exc))
    if not kinds:
        raise click.UsageError("at least one strategy required")
    config = BenchmarkConfig(
        runs=runs, groups=groups, group_size=group_size, filler_atoms=atoms,
        strategies=kinds, regime=PriorRegime(regime), seed=seed, sigma=sigma,
        wall_clock=not no_wall_clock)
    report = run_benchmark(config)
    Path(out).write_text(report.to_csv())
    click.echo(f"wrote {len(report.rows)} rows to {out}")
    for kind in kinds:
        rows = report.rows_for(kind)
        correct = sum(r.correct for r in rows)
        click.echo(f"{kind.value}: mean queries {report.mean_queries(kind):.3f}, "
                   f"correct {correct}/{len(rows)}")
    click.echo(strategy_ratio_line(report))


@cli.command()
@click.option("--port", default=8080, show_default=True, type=int)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--data-dir", default="kbdbg-sessions", show_default=True,
              type=click.Path(file_okay=False))
@click.option("--ui-dir", default=None, type=click.Path(file_okay=False),
              help="Static UI bundle to serve at /. Defaults to frontend/dist if present.")
def serve(port, host, data_dir, ui_dir):
    """Run the HTTP session service."""
    import uvicorn

    from .service import create_app

    if ui_dir is None:
        bundled = Path(__file__).resolve().parents[2] / "frontend" / "dist"
        ui_dir = bundled if bundled.is_dir() else None
    app = create_app(data_dir=data_dir, ui_dir=ui_dir)
    uvicorn.run(app, host=host, port=port)


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 1
    except click.UsageError as exc:
        exc.show()
        return 1
    except click.ClickException as exc:
        exc.show()
        return 1
    except (ParseError, KbFormatError, InfeasibleProblem, OntologyTooLarge,
            UnknownAxiomId) as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    except ValueError as exc:
        click.echo(f"error: {exc}", err=True)
        return 1


if __name__ == "__main__":
    sys.exit(main())
