"""Fast ratio-rule honey-flow allocator and its gap-vs-exact harness.

The rule sizes each type's honey-flow count as a multiple of its real-flow
count, with the multiplier stepping up as the fake-host value falls
relative to the real one: 1.30x when the fake is nearly as valuable
(>= 85% of real), 1.50x on [50%, 85%), 1.65x on (30%, 50%), and 2x
otherwise. It is an approximation tuned for per-flow costs around
0.001..0.1 and similar honey/real ratios across types; its quality is
measured against the exact solver, never assumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .equilibrium import solve_stackelberg
from .errors import ValidationError
from .game import DefenderStrategy, GameSpec, VulnerabilityType
from .strategies import AttackerModel, evaluate_matchup


@dataclass(frozen=True)
class HeuristicInput:
    """Per-type real values, fake-host values, and real-flow counts."""

    real_values: np.ndarray
    fake_values: np.ndarray
    real_flow_counts: np.ndarray

    def __post_init__(self) -> None:
        rv = np.asarray(self.real_values, dtype=float)
        fv = np.asarray(self.fake_values, dtype=float)
        nr = np.asarray(self.real_flow_counts, dtype=int)
        if not (rv.shape == fv.shape == nr.shape) or rv.ndim != 1:
            raise ValidationError("real/fake values and flow counts must be "
                                  "1-d vectors of equal length")
        if np.any(rv <= 0):
            raise ValidationError("real values must be positive")
        if np.any(fv < 0):
            raise ValidationError("fake values must be nonnegative")
        if np.any(nr < 0):
            raise ValidationError("real-flow counts must be nonnegative")
        object.__setattr__(self, "real_values", rv)
        object.__setattr__(self, "fake_values", fv)
        object.__setattr__(self, "real_flow_counts", nr)


def round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def recommend_honey_flows(inp: HeuristicInput) -> np.ndarray:
    """Honey-flow count per type from the value-ratio rule.

    Branch boundaries are inclusive exactly as stated above: a fake value
    at 85% of real takes the 1.30 branch, at 50% the 1.50 branch, and at
    exactly 30% the bottom (2x) branch.
    """
    out = np.zeros(inp.real_values.size, dtype=int)
    for i, (rv, fv, nr) in enumerate(
        zip(inp.real_values, inp.fake_values, inp.real_flow_counts)
    ):
        if 0.85 * rv <= fv <= rv:
            mult = 1.30
        elif 0.5 * rv <= fv < 0.85 * rv:
            mult = 1.50
        elif 0.3 * rv < fv < 0.5 * rv:
            mult = 1.65
        else:
            mult = 2.0
        out[i] = round_half_up(mult * int(nr))
    return out


@dataclass(frozen=True)
class HeuristicGap:
    heuristic_counts: np.ndarray
    heuristic_value: float
    exact_value: float

    @property
    def gap(self) -> float:
        return self.exact_value - self.heuristic_value


def game_from_heuristic_input(
    inp: HeuristicInput, cost: float | Sequence[float]
) -> GameSpec:
    """Game whose optimum the ratio rule approximates.

    Fake-host values enter the attacker's payoff as losses (hitting a fake
    asset costs the attacker what the asset pretends to be worth), and the
    honey bound is twice the real-flow count so every branch's output is
    playable.
    """
    costs = np.broadcast_to(np.asarray(cost, dtype=float), inp.real_values.shape)
    types = tuple(
        VulnerabilityType(
            id=i,
            attacker_real_value=float(rv),
            attacker_honey_value=float(-fv),
            real_flow_count=int(nr),
            honey_flow_bound=int(2 * nr),
            honey_flow_cost=float(ci),
        )
        for i, (rv, fv, nr, ci) in enumerate(
            zip(inp.real_values, inp.fake_values, inp.real_flow_counts, costs)
        )
    )
    return GameSpec(types)


def exactness_gap(inp: HeuristicInput, cost: float | Sequence[float]) -> HeuristicGap:
    """Defender value of the ratio rule vs the exact optimum on one game.

    The rule's counts are played as a deterministic strategy against a
    rational attacker; the exact value comes from the LP solver. The gap
    is reported, not bounded: it is a logged regression metric.
    """
    spec = game_from_heuristic_input(inp, cost)
    counts = recommend_honey_flows(inp)
    strategy = DefenderStrategy.from_counts(spec, counts.tolist())
    played = evaluate_matchup(spec, strategy, "ratio-rule", AttackerModel.RATIONAL)
    exact = solve_stackelberg(spec)
    return HeuristicGap(
        heuristic_counts=counts,
        heuristic_value=played.defender_value,
        exact_value=exact.defender_value,
    )
