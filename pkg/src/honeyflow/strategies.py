"""Baseline defender strategies, attacker models, and matchup evaluation.

The two defender baselines (no honey flows at all; uniformly random honey
counts) and the two naive attackers (uniform over types; greedy under the
pessimistic assumption that every honey bound is fully used) are the
comparison points for the optimized strategy.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DistributionError, EmptyActionSet
from .game import (
    NO_ATTACK,
    AttackerAction,
    DefenderStrategy,
    GameSpec,
    attacker_utility,
    defender_utility,
    real_hit_probabilities,
    utility_vs_mixed_attacker,
    validate_game,
)


class AttackerModel(enum.Enum):
    RATIONAL = "rational"
    UNIFORM_RANDOM = "uniform"
    GREEDY = "greedy"


@dataclass(frozen=True)
class MatchupResult:
    defender_value: float
    attacker_value: float
    attacker_behavior: AttackerAction | dict[AttackerAction, float]
    defender_strategy_label: str


def no_deception_strategy(spec: GameSpec) -> DefenderStrategy:
    """Zero honey flows for every type, with certainty."""
    validate_game(spec)
    return DefenderStrategy.from_counts(spec, [0] * len(spec.types))


def uniform_random_strategy(spec: GameSpec) -> DefenderStrategy:
    """Each type's honey count drawn uniformly from 0..H_i."""
    validate_game(spec)
    return DefenderStrategy(
        tuple(
            np.full(t.honey_flow_bound + 1, 1.0 / (t.honey_flow_bound + 1))
            for t in spec.types
        )
    )


def best_response_defender(
    spec: GameSpec, attacker_dist: dict[AttackerAction, float]
) -> DefenderStrategy:
    """Optimal deterministic strategy against a fixed attacker distribution.

    With the attacker fixed, the defender's objective separates by type:
    pick the count j maximizing q_i * (expected defense value at j) minus
    j times the flow cost. The objective is linear in each marginal, so a
    point mass per type is optimal; scanning j is exact. Ties prefer the
    smaller count.
    """
    validate_game(spec)
    attackable = set(spec.attackable_ids)
    total = 0.0
    q = np.zeros(len(spec.types))
    for action, prob in attacker_dist.items():
        if prob < -1e-9:
            raise DistributionError(f"negative probability {prob} for {action}")
        if action.is_attack:
            if action.target not in attackable:
                raise DistributionError(f"{action} targets an unattackable type")
            q[action.target] += prob
        total += prob
    if abs(total - 1.0) > 1e-9:
        raise DistributionError(f"attacker distribution sums to {total}, not 1")

    counts = []
    for t in spec.types:
        p = real_hit_probabilities(t)
        js = np.arange(t.honey_flow_bound + 1, dtype=float)
        defense = p * t.defender_real_value + (1.0 - p) * t.defender_honey_value
        score = q[t.id] * defense - js * t.honey_flow_cost
        counts.append(int(np.argmax(score)))  # first max: smallest j wins ties
    return DefenderStrategy.from_counts(spec, counts)


def greedy_attacker(spec: GameSpec) -> AttackerAction:
    """Naive attacker assuming every honey bound is fully deployed.

    Scores each attackable type by its expected value when j = H_i honey
    flows are up and attacks the best one (lowest id on ties). Declines to
    attack when every pessimistic estimate is negative.
    """
    validate_game(spec)
    best: tuple[float, int] | None = None
    for i in spec.attackable_ids:
        t = spec.type_by_id(i)
        denom = t.honey_flow_bound + t.real_flow_count
        p = t.real_flow_count / denom
        u = p * t.attacker_real_value + (1.0 - p) * t.attacker_honey_value
        if best is None or u > best[0]:
            best = (u, i)
    if best is None or best[0] < 0.0:
        return NO_ATTACK
    return AttackerAction.attack(best[1])


def uniform_attacker(spec: GameSpec) -> dict[AttackerAction, float]:
    """Uniform distribution over the attackable types (never declines)."""
    validate_game(spec)
    attackable = spec.attackable_ids
    if not attackable:
        raise EmptyActionSet("no attackable vulnerability types")
    share = 1.0 / len(attackable)
    return {AttackerAction.attack(i): share for i in attackable}


def rational_attacker(spec: GameSpec, strategy: DefenderStrategy) -> AttackerAction:
    """Best response to a known defender strategy.

    Maximizes the attacker's expected utility; ties break in the
    defender's favor (the strong-equilibrium convention), then toward the
    lowest type id with no-attack last.
    """
    validate_game(spec)
    actions = [AttackerAction.attack(i) for i in spec.attackable_ids] + [NO_ATTACK]
    values = [attacker_utility(spec, strategy, a) for a in actions]
    best = max(values)
    tied = [a for a, v in zip(actions, values) if v >= best - 1e-9]
    if len(tied) == 1:
        return tied[0]
    defender_values = [defender_utility(spec, strategy, a) for a in tied]
    best_def = max(defender_values)
    for a, v in zip(tied, defender_values):  # listed lowest-id first, no-attack last
        if v >= best_def - 1e-9:
            return a
    return tied[0]


def evaluate_matchup(
    spec: GameSpec,
    strategy: DefenderStrategy,
    label: str,
    attacker: AttackerModel,
) -> MatchupResult:
    """Resolve an attacker model against a defender strategy and score it."""
    if attacker is AttackerModel.RATIONAL:
        action = rational_attacker(spec, strategy)
        return MatchupResult(
            defender_value=defender_utility(spec, strategy, action),
            attacker_value=attacker_utility(spec, strategy, action),
            attacker_behavior=action,
            defender_strategy_label=label,
        )
    if attacker is AttackerModel.GREEDY:
        action = greedy_attacker(spec)
        return MatchupResult(
            defender_value=defender_utility(spec, strategy, action),
            attacker_value=attacker_utility(spec, strategy, action),
            attacker_behavior=action,
            defender_strategy_label=label,
        )
    dist = uniform_attacker(spec)
    d_val, a_val = utility_vs_mixed_attacker(spec, strategy, dist)
    return MatchupResult(
        defender_value=d_val,
        attacker_value=a_val,
        attacker_behavior=dist,
        defender_strategy_label=label,
    )
