"""Command-line front end.

    infogain solve    --a -1 --alpha 0.2 --x0 0.05 --t0 0 --t1 5 --out sched.json
    infogain verify   --config problem.json --n-grid 512
    infogain simulate --a -1 --alpha 0.2 --x0 0.5 --t0 0 --t1 2 --paths 10000 --seed 42
    infogain phase    --a -1 --alpha 0.2 --out phase.csv
    infogain matrix-solve --config matrix.json --out sweep.csv

A ``--config`` JSON file supplies defaults; inline flags override it field
by field.  Exit codes: 0 success, 1 failed verification, 2 invalid input,
3 numerical failure, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from . import io
from .checks import necessary_conditions, oracle_checks, perturb_switches, solution_from_schedule
from .closed_form import phase_field, switching_curve
from .config import DEFAULT
from .errors import DomainError, NumericalFailure
from .matrix_pmp import MatrixProblem, forward_backward_sweep, sweep_rows
from .monte_carlo import duncan_report, report_dict, simulate
from .numerics import evaluate_cost
from .problem import validate_problem
from .scheduler import solve

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3, 4

SUBCOMMANDS = ("solve", "verify", "simulate", "phase", "matrix-solve")
PROBLEM_KEYS = ("a", "alpha", "x0", "t0", "t1")
DEFAULT_OUT = {
    "solve": "schedule.json",
    "verify": None,
    "simulate": "mc_report.json",
    "phase": "phase.csv",
    "matrix-solve": "matrix_sweep.csv",
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    values: dict = field(default_factory=dict)
    out: str | None = None

    def get(self, key, default=None):
        v = self.values.get(key)
        return default if v is None else v

    def problem(self):
        missing = [k for k in PROBLEM_KEYS if self.values.get(k) is None]
        if missing:
            raise UsageError("missing problem parameters: " + ", ".join("--" + k for k in missing))
        return validate_problem(*(float(self.values[k]) for k in PROBLEM_KEYS))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="infogain", description="Bang-bang sensor gain scheduling.")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    parser.commands = {}
    for name in SUBCOMMANDS:
        p = sub.add_parser(name)
        parser.commands[name] = p
        for key in PROBLEM_KEYS:
            p.add_argument(f"--{key}", type=float, default=None)
        p.add_argument("--config", default=None, help="JSON file with defaults")
        p.add_argument("--out", default=None)
        p.add_argument("--dt", type=float, default=None)
        p.add_argument("--paths", type=int, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--n-grid", dest="n_grid", type=int, default=None)
        p.add_argument("--perturb-switch", dest="perturb_switch", type=float, default=None)
    return parser


def load_config(args) -> RunConfig:
    values = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise DomainError(f"config is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise DomainError("config must be a JSON object")
        values.update(data.get("problem", {}))
        values.update({k: v for k, v in data.items() if k != "problem"})
    for key in (*PROBLEM_KEYS, "dt", "paths", "seed", "n_grid", "perturb_switch"):
        v = getattr(args, key)
        if v is not None:
            values[key] = v
    out = args.out if args.out is not None else values.get("out", DEFAULT_OUT[args.subcommand])
    return RunConfig(args.subcommand, values, out)


# ---------------------------------------------------------------- commands


def run_solve(cfg: RunConfig) -> int:
    pr = cfg.problem()
    sol = solve(pr)
    sched = sol.schedule
    cost = evaluate_cost(pr, sched, float(cfg.get("dt", pr.horizon / DEFAULT.pattern_eval_steps)))
    io.write_schedule(cfg.out, pr, sched, cost)
    io.write_trajectory(io.sibling(cfg.out, ".trajectory.csv"), sol.trajectory)
    print(f"case {sched.case}  subcase {sched.subcase}")
    print("switch times: " + (", ".join(f"{t:.10g}" for t in sched.switch_times) or "none"))
    print("levels: " + ", ".join(f"{u:.10g}" for u in sched.levels))
    print(f"mse_integral {cost.mse_integral:.10g}  mutual_info {cost.mutual_info:.10g}  "
          f"total {cost.total:.10g}")
    return EXIT_OK


def run_verify(cfg: RunConfig) -> int:
    pr = cfg.problem()
    sol = solve(pr)
    delta = cfg.get("perturb_switch")
    if delta:
        sched = perturb_switches(sol.schedule, float(delta))
        sol = solution_from_schedule(pr, sched)
    checks = necessary_conditions(sol)
    checks += oracle_checks(pr, sol.schedule, int(cfg.get("n_grid", DEFAULT.pattern_grid)))
    print(f"{'check':<22} {'value':>12} {'limit':>12}  result")
    for c in checks:
        print(c.row())
    ok = all(c.passed for c in checks)
    if cfg.out:
        io.write_json({"problem": pr.to_dict(), "schedule": sol.schedule.to_dict(),
                       "checks": [c.__dict__ for c in checks], "passed": ok}, cfg.out)
    return EXIT_OK if ok else EXIT_VERIFY


def run_simulate(cfg: RunConfig) -> int:
    pr = cfg.problem()
    sched = solve(pr).schedule
    seed = int(cfg.get("seed", 0))
    sim = simulate(pr, sched, int(cfg.get("paths", 10000)), float(cfg.get("dt", DEFAULT.mc_dt)), seed)
    io.write_json(report_dict(sim), cfg.out)
    rep = duncan_report(sim)
    print(f"subcase {sched.subcase}  paths {sim.n_paths}  dt {sim.dt:.3g}  seed {seed}")
    print(f"mse {sim.mse.value:.6g} +- {sim.mse.std_error:.2g}  (Riccati {sim.mse_riccati:.6g})")
    print(f"mi_duncan {sim.mi_duncan.value:.6g} +- {sim.mi_duncan.std_error:.2g}  "
          f"(Riccati {sim.mi_riccati:.6g})  within 3 SE: {rep.within_3se}")
    return EXIT_OK


def run_phase(cfg: RunConfig) -> int:
    for key in ("a", "alpha"):
        if cfg.values.get(key) is None:
            raise UsageError(f"missing problem parameter --{key}")
    a, alpha = float(cfg.values["a"]), float(cfg.values["alpha"])
    if not a < 0:
        raise DomainError("a must be negative")
    if not alpha > 0:
        raise DomainError("alpha must be positive")
    x_range = tuple(cfg.get("x_range", (0.0, 2.0)))
    p_range = tuple(cfg.get("p_range", (0.0, 2.0)))
    nx, ny = int(cfg.get("nx", 50)), int(cfg.get("ny", 50))
    fld = phase_field(a, alpha, x_range, p_range, nx, ny)
    io.write_phase(cfg.out, fld)
    io.write_curve(io.sibling(cfg.out, ".curve.csv"),
                   switching_curve(alpha, x_range, int(cfg.get("curve_points", 200))))
    print(f"{len(fld['x'])} phase rows written to {cfg.out}")
    return EXIT_OK


def run_matrix_solve(cfg: RunConfig) -> int:
    try:
        mp = MatrixProblem.from_dict(cfg.values)
    except KeyError as exc:
        raise UsageError(f"matrix config is missing {exc}") from exc
    res = forward_backward_sweep(mp, int(cfg.get("max_iters", 200)),
                                 float(cfg.get("relaxation", DEFAULT.sweep_relaxation)),
                                 int(cfg.get("n_grid", DEFAULT.sweep_nodes)))
    header, rows = sweep_rows(res)
    io.write_csv(cfg.out, header, rows)
    print(f"n {mp.n}  iterations {res.iterations}  converged {res.converged}")
    print(f"cost {res.cost:.10g}  pmp_residual {res.pmp_residual:.3g}")
    return EXIT_OK


COMMANDS = {
    "solve": run_solve,
    "verify": run_verify,
    "simulate": run_simulate,
    "phase": run_phase,
    "matrix-solve": run_matrix_solve,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with status 2 on bad flags
    try:
        cfg = load_config(args)
        return COMMANDS[cfg.subcommand](cfg)
    except UsageError as exc:
        parser.commands[args.subcommand].print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
