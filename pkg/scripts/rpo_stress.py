"""Certify every p-step on large random terms and cross-check the ordering.

For each term: p-normalize, certify every step, and compare the memoized
ordering against the textbook definition on random pairs of subterms.

    python3 scripts/rpo_stress.py --trials 2000 --size 40 --labels 5
"""

import argparse
import random
import time

from pel.errors import StepBudgetExceeded
from pel.gen import GenConfig, gen_term
from pel.perm import p_normalize
from pel.rpo import RPO, TermTable, certify_perm_step, dershowitz_less, precedence_of
from pel.syntax import subterms


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=2000)
    ap.add_argument("--size", type=int, default=40)
    ap.add_argument("--labels", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--pairs", type=int, default=200)
    args = ap.parse_args()

    steps = certified = disagreements = exhausted = 0
    start = time.perf_counter()
    for i in range(args.trials):
        cfg = GenConfig(seed=args.seed + i, max_size=args.size, max_labels=args.labels)
        t = gen_term(cfg)
        try:
            nf, trace = p_normalize(t, 200_000)
        except StepBudgetExceeded:
            exhausted += 1
            continue
        for s in trace:
            steps += 1
            certified += certify_perm_step(s).ok
        prec = precedence_of(t)
        table = TermTable()
        nodes = sorted({table.add(s) for _, s in subterms(t)} | {table.add(s) for _, s in subterms(nf)})
        rpo = RPO(table, prec)
        memo: dict = {}
        rng = random.Random(i)
        for _ in range(args.pairs):
            n, m = rng.choice(nodes), rng.choice(nodes)
            if rpo.less(n, m) != dershowitz_less(table, prec, n, m, memo):
                disagreements += 1
    dt = time.perf_counter() - start
    print(f"terms {args.trials}  steps {steps}  certified {certified}  "
          f"ordering disagreements {disagreements}  budget exhausted {exhausted}  {dt:.1f}s")
    raise SystemExit(0 if certified == steps and not disagreements else 1)


if __name__ == "__main__":
    main()
