"""Optimal honey-traffic strategies against passive network reconnaissance.

A defender floods the network with fake flows that advertise nonexistent
vulnerable hosts; an attacker watching from compromised switches must
decide which advertised weakness, if any, to act on. This package solves
the resulting leader-follower game exactly, provides baseline and naive
behaviors for comparison, approximates the optimum with a fast ratio rule,
and replays everything in a flow-level simulator.
"""

from .equilibrium import (
    Equilibrium,
    VerificationReport,
    build_best_response_lp,
    solve_stackelberg,
    verify_equilibrium,
)
from .errors import (
    ConfigError,
    DistributionError,
    EmptyActionSet,
    EmptyObservation,
    HoneyflowError,
    ShapeError,
    SolverError,
    TopologyError,
    ValidationError,
)
from .game import (
    NO_ATTACK,
    AttackerAction,
    DefenderStrategy,
    GameSpec,
    VulnerabilityType,
    attacker_utility,
    defender_utility,
    honey_cost,
    load_spec,
    real_attack_probability,
    spec_from_dict,
    spec_to_dict,
    utility_vs_mixed_attacker,
    validate_game,
    validate_strategy,
)
from .heuristics import HeuristicInput, exactness_gap, recommend_honey_flows
from .lp import LinearProgram, LpSolution, solve_lp
from .strategies import (
    AttackerModel,
    MatchupResult,
    best_response_defender,
    evaluate_matchup,
    greedy_attacker,
    no_deception_strategy,
    rational_attacker,
    uniform_attacker,
    uniform_random_strategy,
)

__version__ = "0.1.0"

__all__ = [
    "AttackerAction",
    "AttackerModel",
    "ConfigError",
    "DefenderStrategy",
    "DistributionError",
    "EmptyActionSet",
    "EmptyObservation",
    "Equilibrium",
    "GameSpec",
    "HeuristicInput",
    "HoneyflowError",
    "LinearProgram",
    "LpSolution",
    "MatchupResult",
    "NO_ATTACK",
    "ShapeError",
    "SolverError",
    "TopologyError",
    "ValidationError",
    "VerificationReport",
    "VulnerabilityType",
    "attacker_utility",
    "best_response_defender",
    "build_best_response_lp",
    "defender_utility",
    "evaluate_matchup",
    "exactness_gap",
    "greedy_attacker",
    "honey_cost",
    "load_spec",
    "no_deception_strategy",
    "rational_attacker",
    "real_attack_probability",
    "recommend_honey_flows",
    "solve_lp",
    "solve_stackelberg",
    "spec_from_dict",
    "spec_to_dict",
    "uniform_attacker",
    "uniform_random_strategy",
    "utility_vs_mixed_attacker",
    "validate_game",
    "validate_strategy",
    "verify_equilibrium",
]
