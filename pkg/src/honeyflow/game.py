"""Game data model and closed-form utility computations.

A game instance is a list of vulnerability types. The defender randomizes,
per type, over how many honey flows to create (a marginal distribution over
counts 0..H_i); the attacker targets one type or declines to attack. Attacks
draw a random flow of the chosen type, so the probability of hitting a real
flow when j honey flows are up is R_i / (j + R_i).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DistributionError, ShapeError, ValidationError

PROB_TOL = 1e-9


@dataclass(frozen=True)
class VulnerabilityType:
    """One vulnerability type with its flow counts, values, and flow cost.

    The attacker gains ``attacker_real_value`` for hitting a real flow of
    this type and ``attacker_honey_value`` (possibly negative) for hitting a
    honey flow. The defender's values are the negations; only the honey-flow
    creation cost breaks the zero-sum structure.
    """

    id: int
    attacker_real_value: float
    attacker_honey_value: float
    real_flow_count: int
    honey_flow_bound: int
    honey_flow_cost: float

    @property
    def defender_real_value(self) -> float:
        return -self.attacker_real_value

    @property
    def defender_honey_value(self) -> float:
        return -self.attacker_honey_value


@dataclass(frozen=True)
class GameSpec:
    """An ordered collection of vulnerability types."""

    types: tuple[VulnerabilityType, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "types", tuple(self.types))

    @property
    def attackable_ids(self) -> tuple[int, ...]:
        """Types that can carry at least one flow, real or honey."""
        return tuple(
            t.id for t in self.types if t.real_flow_count + t.honey_flow_bound > 0
        )

    def type_by_id(self, type_id: int) -> VulnerabilityType:
        return self.types[type_id]


@dataclass(frozen=True)
class DefenderStrategy:
    """Per-type marginal distributions over honey-flow counts.

    ``marginals[i][j]`` is the probability of creating exactly j honey flows
    of type i; each vector has length ``honey_flow_bound + 1``.
    """

    marginals: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        frozen = tuple(np.array(m, dtype=float) for m in self.marginals)
        for m in frozen:
            m.setflags(write=False)
        object.__setattr__(self, "marginals", frozen)

    @staticmethod
    def from_counts(spec: GameSpec, counts: Sequence[int]) -> "DefenderStrategy":
        """Point-mass strategy playing a fixed honey-flow count per type."""
        if len(counts) != len(spec.types):
            raise ShapeError(
                f"expected {len(spec.types)} counts, got {len(counts)}"
            )
        marginals = []
        for t, j in zip(spec.types, counts):
            if not 0 <= j <= t.honey_flow_bound:
                raise ShapeError(
                    f"count {j} outside [0, {t.honey_flow_bound}] for type {t.id}"
                )
            m = np.zeros(t.honey_flow_bound + 1)
            m[j] = 1.0
            marginals.append(m)
        return DefenderStrategy(tuple(marginals))


@dataclass(frozen=True, order=True)
class AttackerAction:
    """A pure attacker choice: attack one type, or do not attack.

    ``target`` is the type id, or None for the no-attack action (which
    always yields the attacker exactly 0).
    """

    target: int | None = None

    @staticmethod
    def attack(type_id: int) -> "AttackerAction":
        return AttackerAction(target=type_id)

    @staticmethod
    def no_attack() -> "AttackerAction":
        return AttackerAction(target=None)

    @property
    def is_attack(self) -> bool:
        return self.target is not None

    def __str__(self) -> str:
        return "no-attack" if self.target is None else f"attack({self.target})"


NO_ATTACK = AttackerAction.no_attack()


def validate_game(spec: GameSpec) -> GameSpec:
    """Check all type and spec invariants; return the spec unchanged.

    Raises ValidationError naming the first violated invariant and the
    offending type id.
    """
    if not spec.types:
        raise ValidationError("game must have at least one vulnerability type")
    for pos, t in enumerate(spec.types):
        if t.id != pos:
            raise ValidationError(
                f"type ids must be consecutive from 0; position {pos} has id {t.id}"
            )
        if t.attacker_honey_value > t.attacker_real_value:
            raise ValidationError(
                f"type {t.id}: honey value {t.attacker_honey_value} exceeds "
                f"real value {t.attacker_real_value}"
            )
        if t.honey_flow_cost < 0:
            raise ValidationError(
                f"type {t.id}: honey_flow_cost must be nonnegative, "
                f"got {t.honey_flow_cost}"
            )
        if t.real_flow_count < 0:
            raise ValidationError(
                f"type {t.id}: real_flow_count must be nonnegative, "
                f"got {t.real_flow_count}"
            )
        if t.honey_flow_bound < 0:
            raise ValidationError(
                f"type {t.id}: honey_flow_bound must be nonnegative, "
                f"got {t.honey_flow_bound}"
            )
    return spec


def _check_strategy_shape(spec: GameSpec, strategy: DefenderStrategy) -> None:
    if len(strategy.marginals) != len(spec.types):
        raise ShapeError(
            f"strategy has {len(strategy.marginals)} marginals for "
            f"{len(spec.types)} types"
        )
    for t, m in zip(spec.types, strategy.marginals):
        if m.shape != (t.honey_flow_bound + 1,):
            raise ShapeError(
                f"type {t.id}: marginal length {m.shape[0]} != "
                f"{t.honey_flow_bound + 1}"
            )


def validate_strategy(spec: GameSpec, strategy: DefenderStrategy) -> None:
    """Shape plus probability-distribution checks for a defender strategy."""
    _check_strategy_shape(spec, strategy)
    for t, m in zip(spec.types, strategy.marginals):
        if np.any(m < -PROB_TOL) or np.any(m > 1 + PROB_TOL):
            raise DistributionError(f"type {t.id}: marginal entries outside [0, 1]")
        total = float(m.sum())
        if abs(total - 1.0) > PROB_TOL:
            raise DistributionError(
                f"type {t.id}: marginal sums to {total}, not 1"
            )


def real_hit_probabilities(vt: VulnerabilityType) -> np.ndarray:
    """P(hit a real flow | j honey flows) for j = 0..H, i.e. R/(j+R).

    A type with no real flows has probability 0 for every j (all its flows
    are fake), which is the natural limit of R/(j+R).
    """
    j = np.arange(vt.honey_flow_bound + 1, dtype=float)
    if vt.real_flow_count == 0:
        return np.zeros(vt.honey_flow_bound + 1)
    return vt.real_flow_count / (j + vt.real_flow_count)


def real_attack_probability(
    spec: GameSpec, type_id: int, strategy: DefenderStrategy
) -> float:
    """Probability an attack on ``type_id`` hits a real flow under ``strategy``."""
    _check_strategy_shape(spec, strategy)
    vt = spec.type_by_id(type_id)
    return float(strategy.marginals[type_id] @ real_hit_probabilities(vt))


def honey_cost(spec: GameSpec, strategy: DefenderStrategy) -> float:
    """Expected total cost of the honey flows created under ``strategy``."""
    _check_strategy_shape(spec, strategy)
    total = 0.0
    for t, m in zip(spec.types, strategy.marginals):
        counts = np.arange(t.honey_flow_bound + 1, dtype=float)
        total += float(m @ counts) * t.honey_flow_cost
    return total


def attacker_utility(
    spec: GameSpec, strategy: DefenderStrategy, action: AttackerAction
) -> float:
    """Attacker's expected utility for a pure action against ``strategy``."""
    if not action.is_attack:
        return 0.0
    _check_strategy_shape(spec, strategy)
    vt = spec.type_by_id(action.target)
    p = real_attack_probability(spec, action.target, strategy)
    return p * vt.attacker_real_value + (1.0 - p) * vt.attacker_honey_value


def defender_utility(
    spec: GameSpec, strategy: DefenderStrategy, action: AttackerAction
) -> float:
    """Defender's expected utility: negated attack value minus honey cost.

    The honey cost is sunk before the attacker moves, so the no-attack
    action still costs the defender the full expected honey cost.
    """
    cost = honey_cost(spec, strategy)
    if not action.is_attack:
        return -cost
    vt = spec.type_by_id(action.target)
    p = real_attack_probability(spec, action.target, strategy)
    return p * vt.defender_real_value + (1.0 - p) * vt.defender_honey_value - cost


def utility_vs_mixed_attacker(
    spec: GameSpec,
    strategy: DefenderStrategy,
    attacker_dist: Mapping[AttackerAction, float],
) -> tuple[float, float]:
    """Expected (defender, attacker) utilities against a mixed attacker.

    ``attacker_dist`` maps actions (no-attack and/or attackable types) to
    probabilities summing to 1. The honey-cost term is counted exactly once
    because each pure defender utility carries it and the weights sum to 1.
    """
    attackable = set(spec.attackable_ids)
    total_prob = 0.0
    for action, prob in attacker_dist.items():
        if prob < -PROB_TOL:
            raise DistributionError(f"negative probability {prob} for {action}")
        if action.is_attack and action.target not in attackable:
            raise DistributionError(f"{action} targets an unattackable type")
        total_prob += prob
    if abs(total_prob - 1.0) > PROB_TOL:
        raise DistributionError(f"attacker distribution sums to {total_prob}, not 1")
    d_total = 0.0
    a_total = 0.0
    for action, prob in attacker_dist.items():
        if prob == 0.0:
            continue
        d_total += prob * defender_utility(spec, strategy, action)
        a_total += prob * attacker_utility(spec, strategy, action)
    return d_total, a_total


# --- JSON wire format -------------------------------------------------------

_TYPE_FIELDS = {
    "attacker_real_value",
    "attacker_honey_value",
    "real_flows",
    "honey_flow_bound",
    "cost_per_flow",
}


def spec_from_dict(payload: Mapping) -> GameSpec:
    """Build and validate a GameSpec from the JSON wire representation.

    Expected shape: ``{"types": [{"attacker_real_value": ..,
    "attacker_honey_value": .., "real_flows": .., "honey_flow_bound": ..,
    "cost_per_flow": ..}, ...]}``. Unknown fields are rejected.
    """
    if not isinstance(payload, Mapping):
        raise ValidationError("game spec must be a JSON object")
    unknown = set(payload) - {"types"}
    if unknown:
        raise ValidationError(f"unknown top-level fields: {sorted(unknown)}")
    raw_types = payload.get("types")
    if not isinstance(raw_types, Iterable) or isinstance(raw_types, (str, bytes)):
        raise ValidationError('"types" must be a list of type objects')
    types = []
    for idx, raw in enumerate(raw_types):
        if not isinstance(raw, Mapping):
            raise ValidationError(f"type {idx} must be a JSON object")
        unknown = set(raw) - _TYPE_FIELDS
        if unknown:
            raise ValidationError(f"type {idx}: unknown fields {sorted(unknown)}")
        missing = _TYPE_FIELDS - set(raw)
        if missing:
            raise ValidationError(f"type {idx}: missing fields {sorted(missing)}")
        for int_field in ("real_flows", "honey_flow_bound"):
            if not isinstance(raw[int_field], int) or isinstance(raw[int_field], bool):
                raise ValidationError(f"type {idx}: {int_field} must be an integer")
        types.append(
            VulnerabilityType(
                id=idx,
                attacker_real_value=float(raw["attacker_real_value"]),
                attacker_honey_value=float(raw["attacker_honey_value"]),
                real_flow_count=raw["real_flows"],
                honey_flow_bound=raw["honey_flow_bound"],
                honey_flow_cost=float(raw["cost_per_flow"]),
            )
        )
    return validate_game(GameSpec(tuple(types)))


def spec_to_dict(spec: GameSpec) -> dict:
    """Inverse of spec_from_dict."""
    return {
        "types": [
            {
                "attacker_real_value": t.attacker_real_value,
                "attacker_honey_value": t.attacker_honey_value,
                "real_flows": t.real_flow_count,
                "honey_flow_bound": t.honey_flow_bound,
                "cost_per_flow": t.honey_flow_cost,
            }
            for t in spec.types
        ]
    }


def load_spec(path: str) -> GameSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return spec_from_dict(json.load(fh))


def dump_spec(spec: GameSpec, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(spec_to_dict(spec), fh, indent=2, sort_keys=True)
        fh.write("\n")
