"""Scheduler cost against the pattern-search and direct-transcription oracles."""

import argparse

from infogain.instances import all_instances
from infogain.numerics import evaluate_cost
from infogain.oracles import oracle_direct, oracle_pattern_search, structure_report
from infogain.scheduler import solve


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-grid", type=int, default=256)
    ap.add_argument("--cells", type=int, default=400)
    ap.add_argument("--subcase", action="append", help="restrict to these subcases")
    args = ap.parse_args()
    print(f"{'subcase':<8}{'scheduler':>14}{'pattern gap':>14}{'direct gap':>14}{'iters':>7}  misfits")
    for subcase, pr in all_instances():
        if args.subcase and subcase not in args.subcase:
            continue
        sched = solve(pr).schedule
        J = evaluate_cost(pr, sched, pr.horizon / 10_000).total
        pat = oracle_pattern_search(pr, args.n_grid)
        direct = oracle_direct(pr, args.cells)
        rep = structure_report(direct, sched)
        print(f"{subcase:<8}{J:>14.8f}{J - pat.cost:>14.2e}{J - direct.cost:>14.2e}{direct.iterations:>7}  "
              f"{rep['per_switch']} unassigned {rep['unassigned']}")


if __name__ == "__main__":
    main()
