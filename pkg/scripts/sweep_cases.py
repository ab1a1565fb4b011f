"""Solve every catalogue instance and print its schedule and cost."""

import argparse

from infogain import io
from infogain.instances import all_instances
from infogain.numerics import evaluate_cost
from infogain.scheduler import solve


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", help="optional JSON file with all results")
    args = ap.parse_args()
    rows = []
    print(f"{'subcase':<8}{'a':>6}{'alpha':>8}{'x0':>8}{'T':>6}  {'switches':<26}{'cost':>12}")
    for subcase, pr in all_instances():
        sched = solve(pr).schedule
        cost = evaluate_cost(pr, sched, pr.horizon / 10_000)
        sw = ", ".join(f"{t:.6f}" for t in sched.switch_times) or "-"
        print(f"{sched.subcase:<8}{pr.a:>6g}{pr.alpha:>8g}{pr.x0:>8.4g}{pr.horizon:>6g}  {sw:<26}{cost.total:>12.8f}")
        rows.append({"expected": subcase, **io.schedule_document(pr, sched, cost)})
    if args.out:
        io.write_json(rows, args.out)


if __name__ == "__main__":
    main()
