#!/usr/bin/env python3
"""Strategy-comparison experiment: every prior regime x every strategy on
generated faulty KBs, CSVs written per regime plus a summary table.

    python scripts/run_benchmark.py --runs 50 --out-dir results/
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from kbdbg.benchmark import (BenchmarkConfig, PriorRegime, run_benchmark,
                             strategy_ratio_line)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--runs", type=int, default=50)
    parser.add_argument("--groups", type=int, default=2)
    parser.add_argument("--group-size", type=int, default=3)
    parser.add_argument("--atoms", type=int, default=0)
    parser.add_argument("--sigma", type=float, default=1.0)
    parser.add_argument("--seed", type=int, default=17)
    parser.add_argument("--out-dir", type=Path, default=Path("results"))
    args = parser.parse_args()

    args.out_dir.mkdir(parents=True, exist_ok=True)
    print(f"{'regime':<12} {'strategy':<8} {'mean q':>7} {'correct':>8}")
    for regime in PriorRegime:
        config = BenchmarkConfig(
            runs=args.runs, groups=args.groups, group_size=args.group_size,
            filler_atoms=args.atoms, regime=regime, seed=args.seed,
            sigma=args.sigma)
        report = run_benchmark(config)
        out = args.out_dir / f"bench_{regime.value}.csv"
        out.write_text(report.to_csv())
        for kind in config.strategies:
            rows = report.rows_for(kind)
            correct = sum(r.correct for r in rows)
            print(f"{regime.value:<12} {kind.value:<8} "
                  f"{report.mean_queries(kind):>7.3f} {correct:>5}/{len(rows)}")
        print(f"{'':<12} {strategy_ratio_line(report)}")
    print(f"\nCSVs written to {args.out_dir}/")
    return 0


if __name__ == "__main__":
    sys.exit(main())
