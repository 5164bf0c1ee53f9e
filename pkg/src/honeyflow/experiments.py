"""Random game generation and the four study harnesses.

Harnesses: a honey-flow cost sweep, a defender-vs-attacker matchup grid,
a honey/real ratio analysis, and a solver scalability benchmark. Every
harness is reproducible from (params, seed); wall-clock columns are the
only exception and are marked so writers can drop them.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import platform
import statistics
import subprocess
import time
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._kernels import USING_NUMBA
from .equilibrium import solve_stackelberg
from .errors import ConfigError
from .game import DefenderStrategy, GameSpec, VulnerabilityType
from .heuristics import round_half_up
from .strategies import (
    AttackerModel,
    evaluate_matchup,
    no_deception_strategy,
    uniform_random_strategy,
)

MODE_FAKE_ZERO = "fake-zero-real-one"
MODE_FAKE_EQUALS_REAL = "fake-equals-real-random"
MODE_EXPLICIT = "explicit"

DEFAULT_COST_SWEEP = (1e-5, 1e-4, 1e-3, 1e-2, 1e-1)

# Column names carrying wall-clock measurements; CSV writers drop them
# unless asked, so default outputs stay byte-identical across runs.
TIMING_COLUMNS = frozenset({"solve_time", "median_time", "min_time", "max_time"})


@dataclass(frozen=True)
class GeneratorParams:
    """Knobs for drawing one random game."""

    type_count: int
    real_flows: int | tuple[int, int] = 500
    honey_bound_range: tuple[int, int] = (500, 1000)
    value_mode: str = MODE_FAKE_ZERO
    value_range: tuple[float, float] = (0.5, 1.0)
    real_values: tuple[float, ...] | None = None
    fake_values: tuple[float, ...] | None = None
    cost: float = 1e-4

    def __post_init__(self) -> None:
        if self.type_count < 1:
            raise ConfigError("type_count must be at least 1")
        lo, hi = self.honey_bound_range
        if lo > hi or lo < 0:
            raise ConfigError(f"empty honey bound range [{lo}, {hi}]")
        if isinstance(self.real_flows, tuple):
            lo, hi = self.real_flows
            if lo > hi or lo < 0:
                raise ConfigError(f"empty real flow range [{lo}, {hi}]")
        if self.value_mode not in (MODE_FAKE_ZERO, MODE_FAKE_EQUALS_REAL, MODE_EXPLICIT):
            raise ConfigError(f"unknown value mode {self.value_mode!r}")
        lo, hi = self.value_range
        if lo > hi:
            raise ConfigError(f"empty value range [{lo}, {hi}]")
        if self.value_mode == MODE_EXPLICIT:
            if self.real_values is None or self.fake_values is None:
                raise ConfigError("explicit mode needs real_values and fake_values")
            if (
                len(self.real_values) != self.type_count
                or len(self.fake_values) != self.type_count
            ):
                raise ConfigError("explicit value vectors must match type_count")
        if self.cost < 0:
            raise ConfigError("cost must be nonnegative")


def random_game(params: GeneratorParams, seed) -> GameSpec:
    """Deterministic random game; identical (params, seed) give identical specs."""
    rng = np.random.default_rng(seed)
    types = []
    for i in range(params.type_count):
        if isinstance(params.real_flows, tuple):
            lo, hi = params.real_flows
            r = int(rng.integers(lo, hi + 1))
        else:
            r = int(params.real_flows)
        lo, hi = params.honey_bound_range
        h = int(rng.integers(lo, hi + 1))
        if params.value_mode == MODE_FAKE_ZERO:
            real_v, honey_v = 1.0, 0.0
        elif params.value_mode == MODE_FAKE_EQUALS_REAL:
            v = float(rng.uniform(*params.value_range))
            real_v, honey_v = v, v
        else:
            real_v = float(params.real_values[i])
            honey_v = float(params.fake_values[i])
        types.append(
            VulnerabilityType(
                id=i,
                attacker_real_value=real_v,
                attacker_honey_value=honey_v,
                real_flow_count=r,
                honey_flow_bound=h,
                honey_flow_cost=params.cost,
            )
        )
    return GameSpec(tuple(types))


@dataclass(frozen=True)
class ExperimentReport:
    columns: tuple[str, ...]
    rows: tuple[tuple, ...]
    metadata: dict

    def write_csv(self, path, with_timing: bool = False) -> None:
        keep = [
            i
            for i, c in enumerate(self.columns)
            if with_timing or c not in TIMING_COLUMNS
        ]
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow([self.columns[i] for i in keep])
            for row in self.rows:
                writer.writerow(
                    [repr(v) if isinstance(v, float) else v for i, v in enumerate(row) if i in keep]
                )

    def write_metadata(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.metadata, fh, indent=2, sort_keys=True)
            fh.write("\n")


def _build_stamp() -> str:
    try:
        out = subprocess.run(
            ["git", "describe", "--always", "--dirty"],
            capture_output=True,
            text=True,
            timeout=5,
        )
        if out.returncode == 0:
            return out.stdout.strip()
    except (OSError, subprocess.TimeoutExpired):
        pass
    return "unknown"


def _metadata(seed: int, params: GeneratorParams | None, **extra) -> dict:
    meta = {"seed": seed, "build": _build_stamp(), **extra}
    if params is not None:
        meta["params"] = dataclasses.asdict(params)
    return meta


def _three_defenders(spec: GameSpec):
    eq = solve_stackelberg(spec)
    return (
        ("stackelberg", eq.strategy, eq.solve_time),
        ("uniform", uniform_random_strategy(spec), 0.0),
        ("no-deception", no_deception_strategy(spec), 0.0),
    )


def cost_sweep(
    params: GeneratorParams,
    costs: Sequence[float] = DEFAULT_COST_SWEEP,
    trials: int = 100,
    seed: int = 0,
) -> ExperimentReport:
    """Mean defender/attacker values per cost for the three defenders,
    each facing a rational attacker. The same seeded games recur across
    costs so rows differ only in the cost."""
    if not costs:
        raise ConfigError("cost sweep needs at least one cost")
    game_seeds = np.random.SeedSequence(seed).spawn(trials)
    rows = []
    for cost in costs:
        sums = {name: [0.0, 0.0] for name in ("stackelberg", "uniform", "no-deception")}
        total_time = 0.0
        swept = dataclasses.replace(params, cost=float(cost))
        for t in range(trials):
            spec = random_game(swept, game_seeds[t])
            for name, strategy, solve_time in _three_defenders(spec):
                result = evaluate_matchup(spec, strategy, name, AttackerModel.RATIONAL)
                sums[name][0] += result.defender_value
                sums[name][1] += result.attacker_value
                total_time += solve_time
        row = [float(cost)]
        for name in ("stackelberg", "uniform", "no-deception"):
            row.extend([sums[name][0] / trials, sums[name][1] / trials])
        row.append(total_time / trials)
        rows.append(tuple(row))
    columns = (
        "cost",
        "stackelberg_def",
        "stackelberg_att",
        "uniform_def",
        "uniform_att",
        "no_deception_def",
        "no_deception_att",
        "solve_time",
    )
    return ExperimentReport(
        columns, tuple(rows), _metadata(seed, params, trials=trials, costs=list(map(float, costs)))
    )


def matchup_grid(
    params: GeneratorParams, trials: int = 100, seed: int = 0
) -> ExperimentReport:
    """Mean values for every defender x attacker-model pairing."""
    game_seeds = np.random.SeedSequence(seed).spawn(trials)
    attackers = (AttackerModel.RATIONAL, AttackerModel.UNIFORM_RANDOM, AttackerModel.GREEDY)
    defenders = ("stackelberg", "uniform", "no-deception")
    sums = {(d, a): [0.0, 0.0] for d in defenders for a in attackers}
    for t in range(trials):
        spec = random_game(params, game_seeds[t])
        for name, strategy, _solve_time in _three_defenders(spec):
            for attacker in attackers:
                result = evaluate_matchup(spec, strategy, name, attacker)
                sums[(name, attacker)][0] += result.defender_value
                sums[(name, attacker)][1] += result.attacker_value
    rows = tuple(
        (d, a.value, sums[(d, a)][0] / trials, sums[(d, a)][1] / trials)
        for d in defenders
        for a in attackers
    )
    columns = ("defender", "attacker", "mean_def", "mean_att")
    return ExperimentReport(columns, rows, _metadata(seed, params, trials=trials))


def ratio_analysis(
    real_values: Sequence[float],
    fake_values: Sequence[float],
    ratios: Sequence[float],
    real_flow_counts: Sequence[int],
    cost: float,
) -> ExperimentReport:
    """Defender value of fixed honey/real ratios across real-flow counts.

    ``fake_values`` are fake-host magnitudes: hitting one costs the
    attacker that much (the honey payoff is their negation). For each
    real-flow count the argmax ratio over the grid (the knee) lands in the
    metadata under ``optimal_ratios``.
    """
    if not ratios or min(ratios) < 0:
        raise ConfigError("ratio grid must be nonempty and nonnegative")
    max_ratio = max(ratios)
    rows = []
    optimal: dict[str, float] = {}
    for rf in real_flow_counts:
        bound = max(round_half_up(max_ratio * rf), 0)
        types = tuple(
            VulnerabilityType(
                id=i,
                attacker_real_value=float(rv),
                attacker_honey_value=float(-fv),
                real_flow_count=int(rf),
                honey_flow_bound=bound,
                honey_flow_cost=float(cost),
            )
            for i, (rv, fv) in enumerate(zip(real_values, fake_values))
        )
        spec = GameSpec(types)
        best: tuple[float, float] | None = None
        for ratio in ratios:
            j = min(round_half_up(ratio * rf), bound)
            strategy = DefenderStrategy.from_counts(spec, [j] * len(types))
            result = evaluate_matchup(
                spec, strategy, f"ratio={ratio}", AttackerModel.RATIONAL
            )
            rows.append((int(rf), float(ratio), result.defender_value, result.attacker_value))
            if best is None or result.defender_value > best[1]:
                best = (float(ratio), result.defender_value)
        optimal[str(int(rf))] = best[0]
    columns = ("real_flows", "ratio", "defender_value", "attacker_value")
    meta = {
        "seed": 0,
        "build": _build_stamp(),
        "real_values": list(map(float, real_values)),
        "fake_values": list(map(float, fake_values)),
        "cost": float(cost),
        "ratios": list(map(float, ratios)),
        "optimal_ratios": optimal,
    }
    return ExperimentReport(columns, tuple(rows), meta)


def scalability_bench(
    dimension: str,
    sizes: Sequence[int],
    trials: int = 5,
    seed: int = 0,
) -> ExperimentReport:
    """Median wall-clock solve time per problem size.

    ``dimension`` is "types" (vary the number of vulnerability types,
    honey bounds fixed at 100) or "honey_bounds" (5 types, vary the
    bound). A small warm-up solve runs first so one-time compilation is
    not billed to the first size.
    """
    if dimension not in ("types", "honey_bounds"):
        raise ConfigError(f"unknown bench dimension {dimension!r}")
    if list(sizes) != sorted(sizes):
        raise ConfigError("sizes must be ascending")
    solve_stackelberg(
        random_game(GeneratorParams(type_count=2, real_flows=5, honey_bound_range=(3, 3)), 0)
    )  # warm-up: JIT compile + caches
    game_seeds = np.random.SeedSequence(seed).spawn(trials)
    rows = []
    for size in sizes:
        if dimension == "types":
            params = GeneratorParams(
                type_count=int(size), real_flows=500, honey_bound_range=(100, 100)
            )
        else:
            params = GeneratorParams(
                type_count=5, real_flows=500, honey_bound_range=(int(size), int(size))
            )
        times = []
        for t in range(trials):
            spec = random_game(params, game_seeds[t])
            start = time.perf_counter()
            solve_stackelberg(spec)
            times.append(time.perf_counter() - start)
        rows.append(
            (
                dimension,
                int(size),
                statistics.median(times),
                min(times),
                max(times),
                trials,
            )
        )
    columns = ("dimension", "size", "median_time", "min_time", "max_time", "trials")
    meta = {
        "seed": seed,
        "build": _build_stamp(),
        "dimension": dimension,
        "sizes": [int(s) for s in sizes],
        "trials": trials,
        "machine": {
            "platform": platform.platform(),
            "python": platform.python_version(),
            "numba": USING_NUMBA,
        },
    }
    return ExperimentReport(columns, tuple(rows), meta)
