"""Strategic M/M/1 queueing with a paid option to inspect the queue length."""

from .equilibrium import (
    Equilibrium,
    Region,
    boundary_curves,
    compute_equilibrium,
    solve_interior,
    solve_pi_star,
    solve_pj_star,
    verify_equilibrium,
)
from .errors import InvalidInput, NoConvergence, OutOfRegion, StratqError
from .oracle import best_response_dynamics, simulate, solve_truncated_chain
from .params import ModelParams, Scenario, classify_scenario, threshold, validate
from .steady_state import QueueDist, Strategy, stationary
from .utilities import UtilityTriple, u_diff, u_inspect, u_join, utility_triple
from .welfare import GridRow, WelfareReport, region_map, sensitivity, social_welfare, threshold_crossing_report

__version__ = "0.1.0"

__all__ = [
    "Equilibrium",
    "GridRow",
    "InvalidInput",
    "ModelParams",
    "NoConvergence",
    "OutOfRegion",
    "QueueDist",
    "Region",
    "Scenario",
    "Strategy",
    "StratqError",
    "UtilityTriple",
    "WelfareReport",
    "best_response_dynamics",
    "boundary_curves",
    "classify_scenario",
    "compute_equilibrium",
    "region_map",
    "sensitivity",
    "simulate",
    "social_welfare",
    "solve_interior",
    "solve_pi_star",
    "solve_pj_star",
    "solve_truncated_chain",
    "stationary",
    "threshold",
    "threshold_crossing_report",
    "u_diff",
    "u_inspect",
    "u_join",
    "utility_triple",
    "validate",
    "verify_equilibrium",
]
