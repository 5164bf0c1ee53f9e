import csv
import json

import numpy as np
import pytest

from honeyflow.equilibrium import solve_stackelberg
from honeyflow.errors import ConfigError
from honeyflow.experiments import (
    DEFAULT_COST_SWEEP,
    MODE_EXPLICIT,
    MODE_FAKE_EQUALS_REAL,
    GeneratorParams,
    cost_sweep,
    matchup_grid,
    random_game,
    ratio_analysis,
    scalability_bench,
)
from honeyflow.game import (
    DefenderStrategy,
    GameSpec,
    VulnerabilityType,
    utility_vs_mixed_attacker,
)
from honeyflow.strategies import (
    AttackerModel,
    evaluate_matchup,
    no_deception_strategy,
    uniform_attacker,
)

SMALL = GeneratorParams(
    type_count=3, real_flows=5, honey_bound_range=(3, 6), cost=0.01
)


class TestRandomGame:
    def test_mode_a_values(self):
        params = GeneratorParams(type_count=5, real_flows=500, honey_bound_range=(500, 1000))
        spec = random_game(params, seed=1)
        assert len(spec.types) == 5
        for t in spec.types:
            assert t.attacker_real_value == 1.0
            assert t.attacker_honey_value == 0.0
            assert t.real_flow_count == 500
            assert 500 <= t.honey_flow_bound <= 1000

    def test_mode_b_values(self):
        params = GeneratorParams(
            type_count=4,
            real_flows=10,
            honey_bound_range=(5, 9),
            value_mode=MODE_FAKE_EQUALS_REAL,
        )
        spec = random_game(params, seed=2)
        for t in spec.types:
            assert 0.5 <= t.attacker_real_value <= 1.0
            assert t.attacker_honey_value == t.attacker_real_value

    def test_explicit_vectors(self):
        params = GeneratorParams(
            type_count=5,
            real_flows=100,
            honey_bound_range=(50, 50),
            value_mode=MODE_EXPLICIT,
            real_values=(0.8, 0.5, 0.9, 0.6, 1.0),
            fake_values=(0.0, 0.0, 0.0, 0.0, 0.0),
            cost=0.0005,
        )
        spec = random_game(params, seed=3)
        assert [t.attacker_real_value for t in spec.types] == [0.8, 0.5, 0.9, 0.6, 1.0]
        assert all(t.attacker_honey_value == 0.0 for t in spec.types)
        assert all(t.honey_flow_cost == 0.0005 for t in spec.types)

    def test_same_seed_identical(self):
        params = GeneratorParams(
            type_count=3,
            real_flows=(5, 20),
            honey_bound_range=(2, 9),
            value_mode=MODE_FAKE_EQUALS_REAL,
        )
        assert random_game(params, seed=9) == random_game(params, seed=9)

    def test_bad_params_rejected(self):
        with pytest.raises(ConfigError):
            GeneratorParams(type_count=0, real_flows=5, honey_bound_range=(1, 2))
        with pytest.raises(ConfigError):
            GeneratorParams(type_count=1, real_flows=5, honey_bound_range=(3, 2))
        with pytest.raises(ConfigError):
            GeneratorParams(type_count=1, real_flows=5, honey_bound_range=(1, 2), value_mode="?")
        with pytest.raises(ConfigError):
            GeneratorParams(
                type_count=2,
                real_flows=5,
                honey_bound_range=(1, 2),
                value_mode=MODE_EXPLICIT,
                real_values=(1.0,),
                fake_values=(0.0,),
            )


class TestCostSweep:
    def test_high_cost_collapses_to_no_deception(self):
        report = cost_sweep(SMALL, costs=[10.0], trials=4, seed=5)
        row = dict(zip(report.columns, report.rows[0]))
        assert abs(row["stackelberg_def"] - row["no_deception_def"]) <= 1e-6

    def test_free_flows_order_the_strategies(self):
        report = cost_sweep(SMALL, costs=[0.0], trials=6, seed=5)
        row = dict(zip(report.columns, report.rows[0]))
        assert row["stackelberg_def"] >= row["uniform_def"] - 1e-9
        assert row["uniform_def"] >= row["no_deception_def"] - 1e-9

    def test_stackelberg_dominates_at_every_cost(self):
        report = cost_sweep(SMALL, costs=list(DEFAULT_COST_SWEEP), trials=3, seed=8)
        for raw in report.rows:
            row = dict(zip(report.columns, raw))
            assert row["stackelberg_def"] >= row["uniform_def"] - 1e-6
            assert row["stackelberg_def"] >= row["no_deception_def"] - 1e-6

    def test_rows_reproducible(self):
        a = cost_sweep(SMALL, costs=[0.01], trials=3, seed=4)
        b = cost_sweep(SMALL, costs=[0.01], trials=3, seed=4)
        ti = a.columns.index("solve_time")
        for ra, rb in zip(a.rows, b.rows):
            assert ra[:ti] == rb[:ti]

    def test_empty_cost_list_rejected(self):
        with pytest.raises(ConfigError):
            cost_sweep(SMALL, costs=[], trials=1, seed=0)


class TestMatchupGrid:
    def test_stackelberg_rational_cell_matches_solver(self):
        report = matchup_grid(SMALL, trials=1, seed=12)
        spec = random_game(SMALL, np.random.SeedSequence(12).spawn(1)[0])
        eq = solve_stackelberg(spec)
        cell = next(
            dict(zip(report.columns, r))
            for r in report.rows
            if r[0] == "stackelberg" and r[1] == "rational"
        )
        assert cell["mean_def"] == pytest.approx(eq.defender_value, abs=1e-9)
        assert cell["mean_att"] == pytest.approx(eq.attacker_value, abs=1e-9)

    def test_grid_covers_all_nine_cells(self):
        report = matchup_grid(SMALL, trials=1, seed=1)
        assert len(report.rows) == 9

    def test_symmetric_spec_symmetric_uniform_attacker(self):
        """On a symmetric game the uniform attacker cannot distinguish the
        types, so swapping the defender's per-type marginals changes
        nothing."""
        t0 = VulnerabilityType(0, 1.0, -1.0, 5, 3, 0.01)
        t1 = VulnerabilityType(1, 1.0, -1.0, 5, 3, 0.01)
        spec = GameSpec((t0, t1))
        dist = uniform_attacker(spec)
        m_a = np.array([0.2, 0.3, 0.5, 0.0])
        m_b = np.array([1.0, 0.0, 0.0, 0.0])
        forward = utility_vs_mixed_attacker(
            spec, DefenderStrategy((m_a, m_b)), dist
        )
        swapped = utility_vs_mixed_attacker(
            spec, DefenderStrategy((m_b, m_a)), dist
        )
        assert forward == pytest.approx(swapped, abs=1e-12)


class TestRatioAnalysis:
    def test_zero_ratio_equals_no_deception(self):
        report = ratio_analysis(
            real_values=[10.0, 20.0],
            fake_values=[9.0, 18.0],
            ratios=[0.0, 0.5, 1.0],
            real_flow_counts=[5],
            cost=0.1,
        )
        first = dict(zip(report.columns, report.rows[0]))
        assert first["ratio"] == 0.0
        types = tuple(
            VulnerabilityType(i, rv, -fv, 5, 5, 0.1)
            for i, (rv, fv) in enumerate([(10.0, 9.0), (20.0, 18.0)])
        )
        spec = GameSpec(types)
        base = evaluate_matchup(
            spec, no_deception_strategy(spec), "none", AttackerModel.RATIONAL
        )
        assert first["defender_value"] == pytest.approx(base.defender_value, abs=1e-9)

    def test_optimal_ratios_recorded(self):
        report = ratio_analysis(
            real_values=[10.0, 20.0, 30.0, 40.0],
            fake_values=[9.0, 18.0, 27.0, 32.0],
            ratios=[round(0.2 * k, 2) for k in range(11)],
            real_flow_counts=[10, 15],
            cost=0.1,
        )
        assert set(report.metadata["optimal_ratios"]) == {"10", "15"}
        assert len(report.rows) == 22

    def test_value_rises_to_a_knee_then_falls(self):
        report = ratio_analysis(
            real_values=[10.0, 20.0, 30.0, 40.0],
            fake_values=[9.0, 18.0, 27.0, 32.0],
            ratios=[round(0.1 * k, 2) for k in range(31)],
            real_flow_counts=[10],
            cost=0.1,
        )
        values = [r[2] for r in report.rows]
        knee = values.index(max(values))
        assert 0 < knee < len(values) - 1  # interior optimum
        assert max(values) > values[0]  # honey flows helped
        assert values[-1] < max(values)  # then pure cost drags it back down

    def test_negative_ratio_rejected(self):
        with pytest.raises(ConfigError):
            ratio_analysis([1.0], [0.5], [-0.1, 0.5], [5], 0.1)


class TestScalabilityBench:
    def test_small_bench_runs_and_orders(self):
        report = scalability_bench("types", sizes=[1, 2], trials=2, seed=3)
        assert len(report.rows) == 2
        assert report.rows[0][1] == 1
        assert report.metadata["machine"]["numba"] in (True, False)
        assert all(r[2] > 0 for r in report.rows)

    def test_smallest_game_is_near_instant(self):
        import time

        spec = GameSpec((VulnerabilityType(0, 1.0, 0.0, 1, 1, 0.01),))
        solve_stackelberg(spec)  # warm-up: one-time JIT compile
        start = time.perf_counter()
        solve_stackelberg(spec)
        assert time.perf_counter() - start < 0.01

    def test_descending_sizes_rejected(self):
        with pytest.raises(ConfigError):
            scalability_bench("types", sizes=[4, 2], trials=1, seed=0)

    def test_unknown_dimension_rejected(self):
        with pytest.raises(ConfigError):
            scalability_bench("widths", sizes=[1], trials=1, seed=0)


class TestReportFiles:
    def test_csv_drops_timing_by_default(self, tmp_path):
        report = cost_sweep(SMALL, costs=[0.01], trials=2, seed=4)
        out = tmp_path / "sweep.csv"
        report.write_csv(out)
        with open(out) as fh:
            header = next(csv.reader(fh))
        assert "solve_time" not in header

        out_t = tmp_path / "sweep_t.csv"
        report.write_csv(out_t, with_timing=True)
        with open(out_t) as fh:
            header = next(csv.reader(fh))
        assert "solve_time" in header

    def test_metadata_sidecar(self, tmp_path):
        report = cost_sweep(SMALL, costs=[0.01], trials=2, seed=4)
        meta_path = tmp_path / "sweep.meta.json"
        report.write_metadata(meta_path)
        meta = json.loads(meta_path.read_text())
        assert meta["seed"] == 4
        assert meta["params"]["type_count"] == 3
        assert "build" in meta

    def test_csv_floats_round_trip(self, tmp_path):
        report = cost_sweep(SMALL, costs=[0.01], trials=2, seed=4)
        out = tmp_path / "sweep.csv"
        report.write_csv(out)
        with open(out) as fh:
            reader = csv.reader(fh)
            header = next(reader)
            row = next(reader)
        idx = header.index("stackelberg_def")
        original = report.rows[0][report.columns.index("stackelberg_def")]
        assert float(row[idx]) == original
