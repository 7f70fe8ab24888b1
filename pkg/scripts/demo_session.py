#!/usr/bin/env python3
"""Walk one simulated debugging session step by step, printing each query,
the oracle's answer, and the belief distribution after the update.

    python scripts/demo_session.py --groups 2 --group-size 3 --seed 5
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from kbdbg.kb import format_kb
from kbdbg.selection import Strategy, StrategyKind
from kbdbg.session import (SessionStatus, generate_faulty_kb, simulated_oracle,
                           start_session, submit_answer)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--groups", type=int, default=2)
    parser.add_argument("--group-size", type=int, default=3)
    parser.add_argument("--seed", type=int, default=5)
    parser.add_argument("--strategy", default="entropy",
                        choices=[k.value for k in StrategyKind])
    parser.add_argument("--sigma", type=float, default=1.0)
    args = parser.parse_args()

    kb, target = generate_faulty_kb(args.groups, args.group_size, seed=args.seed)
    print("generated knowledge base:")
    print(format_kb(kb))
    print(f"seeded target diagnosis: {sorted(target.target_diagnosis)}\n")

    kind = StrategyKind(args.strategy)
    strategy = Strategy(kind, args.seed if kind is StrategyKind.RANDOM else None)
    oracle = simulated_oracle(kb, target)
    session = start_session(kb, strategy, sigma=args.sigma)
    step = 0
    while session.status is SessionStatus.AWAITING_ANSWER:
        step += 1
        query = session.current_query
        answer = oracle(query)
        print(f"query {step}: entail {list(query.sentence_texts)}?  oracle: {answer}")
        submit_answer(session, answer)
        for d, p in session.ranked():
            print(f"    {p:7.2%}  {{{', '.join(d.sorted_ids)}}}")
    print(f"\n{session.status.value} after {step} queries")
    final = session.final_diagnosis()
    if final is not None:
        hit = final.axiom_ids == target.target_diagnosis
        print(f"final diagnosis {{{', '.join(final.sorted_ids)}}} "
              f"({'matches' if hit else 'MISSES'} the target)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
