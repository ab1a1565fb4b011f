"""Numerical tolerances and defaults, kept in one place."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    # classification
    threshold_rel: float = 1e-12
    degenerate_log_arg: float = 1e-10
    singular_k3: float = 1e-12
    # root finding
    root_t: float = 1e-12
    root_maxiter: int = 80
    c4_scan_points: int = 512
    # necessary-condition checks
    switch_residual: float = 1e-8
    continuity: float = 1e-8
    terminal_costate: float = 1e-10
    sign_rule: float = 1e-9
    hamiltonian_rel: float = 1e-6
    # output
    trajectory_points: int = 2048
    # oracles
    pattern_grid: int = 256
    pattern_eval_steps: int = 10_000
    direct_cells: int = 400
    direct_iters: int = 3000
    direct_rel_decrease: float = 1e-10
    direct_stationarity: float = 1e-9
    # matrix sweep
    sweep_nodes: int = 4096
    sweep_relaxation: float = 0.3
    sweep_change: float = 1e-8
    # Monte Carlo
    mc_dt: float = 1e-3


DEFAULT = Tolerances()
