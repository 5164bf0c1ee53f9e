import numpy as np
import pytest
from scipy.optimize import linprog

from honeyflow.equilibrium import build_best_response_lp
from honeyflow.errors import ValidationError
from honeyflow.game import AttackerAction
from honeyflow.lp import (
    FEASIBILITY_TOL,
    INFEASIBLE,
    OPTIMAL,
    UNBOUNDED,
    LinearProgram,
    solve_lp,
)
from oracles import exact_fixed_action_value, pair_grid_fixed_action_value


def _random_lp(rng: np.random.Generator) -> LinearProgram:
    """Random LP that is equality-feasible by construction (bounds vary)."""
    n = int(rng.integers(1, 10))
    m_ub = int(rng.integers(0, 6))
    m_eq = int(rng.integers(0, 3))
    c = rng.normal(size=n)
    a_ub = rng.normal(size=(m_ub, n))
    b_ub = rng.uniform(0.1, 2.0, size=m_ub)
    a_eq = rng.normal(size=(m_eq, n))
    witness = rng.uniform(0.0, 1.0, size=n)
    b_eq = a_eq @ witness
    upper = np.where(rng.random(n) < 0.5, rng.uniform(0.5, 3.0, size=n), np.inf)
    upper = np.maximum(upper, witness + 0.1)
    return LinearProgram(
        objective=c,
        eq_rows=a_eq,
        eq_rhs=b_eq,
        ineq_rows=a_ub,
        ineq_rhs=b_ub,
        upper=upper,
    )


class TestBasics:
    def test_single_variable_upper_row(self):
        sol = solve_lp(LinearProgram(objective=[1.0], ineq_rows=[[1.0]], ineq_rhs=[1.0]))
        assert sol.status == OPTIMAL
        assert sol.x[0] == pytest.approx(1.0, abs=1e-12)
        assert sol.objective_value == pytest.approx(1.0, abs=1e-12)

    def test_degenerate_optimum_face(self):
        sol = solve_lp(
            LinearProgram(objective=[1.0, 1.0], eq_rows=[[1.0, 1.0]], eq_rhs=[1.0])
        )
        assert sol.status == OPTIMAL
        assert sol.objective_value == pytest.approx(1.0, abs=1e-12)

    def test_infeasible_status(self):
        sol = solve_lp(LinearProgram(objective=[1.0], eq_rows=[[1.0]], eq_rhs=[-1.0]))
        assert sol.status == INFEASIBLE
        assert sol.x is None

    def test_unbounded_status(self):
        sol = solve_lp(LinearProgram(objective=[1.0]))
        assert sol.status == UNBOUNDED

    def test_box_only_problem(self):
        sol = solve_lp(LinearProgram(objective=[2.0, -1.0, 3.0], upper=[1.0, 5.0, 2.0]))
        assert sol.status == OPTIMAL
        assert sol.x == pytest.approx([1.0, 0.0, 2.0])

    def test_negative_upper_bound_is_infeasible(self):
        sol = solve_lp(LinearProgram(objective=[1.0], upper=[-1.0]))
        assert sol.status == INFEASIBLE

    def test_negative_ineq_rhs_needs_artificial(self):
        # -x1 <= -2 means x1 >= 2
        sol = solve_lp(
            LinearProgram(objective=[-1.0], ineq_rows=[[-1.0]], ineq_rhs=[-2.0])
        )
        assert sol.status == OPTIMAL
        assert sol.x[0] == pytest.approx(2.0, abs=1e-9)


class TestMalformedInput:
    def test_row_width_mismatch(self):
        with pytest.raises(ValidationError, match="rows"):
            LinearProgram(objective=[1.0, 2.0], eq_rows=[[1.0, 2.0]], eq_rhs=[1.0, 2.0])

    def test_nonfinite_coefficients(self):
        with pytest.raises(ValidationError, match="finite"):
            LinearProgram(objective=[np.inf])
        with pytest.raises(ValidationError, match="finite"):
            LinearProgram(objective=[1.0], ineq_rows=[[np.nan]], ineq_rhs=[1.0])

    def test_nan_upper_bound(self):
        with pytest.raises(ValidationError, match="NaN"):
            LinearProgram(objective=[1.0], upper=[np.nan])


class TestAgainstReferences:
    def test_worked_example_best_response_lp_matches_oracles(self, worked_example):
        """Fixing the attacker on the second type, the LP optimum must agree
        with the exhaustive fixed-action search (exactly) and with its
        0.01-resolution grid variant (within the grid's gap)."""
        lp = build_best_response_lp(worked_example, AttackerAction.attack(1))
        sol = solve_lp(lp)
        assert sol.status == OPTIMAL
        exact = exact_fixed_action_value(worked_example, 1)
        grid = pair_grid_fixed_action_value(worked_example, 1, resolution=0.01)
        assert sol.objective_value == pytest.approx(exact, abs=1e-9)
        assert sol.objective_value == pytest.approx(grid, abs=1e-3)
        assert grid <= sol.objective_value + 1e-9

    def test_scipy_agreement_on_random_lps(self):
        rng = np.random.default_rng(2024)
        for _ in range(150):
            prob = _random_lp(rng)
            mine = solve_lp(prob)
            bounds = [
                (0.0, u if np.isfinite(u) else None) for u in prob.upper
            ]
            ref = linprog(
                -prob.objective,
                A_ub=prob.ineq_rows if prob.ineq_rows.size else None,
                b_ub=prob.ineq_rhs if prob.ineq_rhs.size else None,
                A_eq=prob.eq_rows if prob.eq_rows.size else None,
                b_eq=prob.eq_rhs if prob.eq_rhs.size else None,
                bounds=bounds,
                method="highs",
            )
            if ref.status == 0:
                assert mine.status == OPTIMAL
                scale = max(1.0, abs(ref.fun))
                assert mine.objective_value == pytest.approx(
                    -ref.fun, abs=1e-6 * scale
                )
            elif ref.status == 2:
                assert mine.status == INFEASIBLE
            elif ref.status == 3:
                assert mine.status == UNBOUNDED

    def test_strong_duality_spot_check(self):
        """Primal max c.x s.t. Ax <= b, x >= 0 against the dual built here:
        min b.y s.t. A^T y >= c, y >= 0."""
        rng = np.random.default_rng(99)
        checked = 0
        for _ in range(60):
            n = int(rng.integers(1, 7))
            m = int(rng.integers(1, 6))
            c = rng.normal(size=n)
            a = rng.normal(size=(m, n))
            b = rng.uniform(0.2, 2.0, size=m)
            primal = solve_lp(
                LinearProgram(
                    objective=c,
                    ineq_rows=np.vstack([a, np.ones((1, n))]),
                    ineq_rhs=np.concatenate([b, [50.0]]),
                )
            )
            assert primal.status == OPTIMAL  # bounded by the extra row, 0 feasible
            dual = solve_lp(
                LinearProgram(
                    objective=-np.concatenate([b, [50.0]]),
                    ineq_rows=-np.vstack([a, np.ones((1, n))]).T,
                    ineq_rhs=-c,
                )
            )
            assert dual.status == OPTIMAL
            assert primal.objective_value == pytest.approx(
                -dual.objective_value, abs=1e-6
            )
            checked += 1
        assert checked == 60


class TestDeterminismAndFeasibility:
    def test_resolve_is_bit_identical(self):
        rng = np.random.default_rng(5)
        for _ in range(25):
            prob = _random_lp(rng)
            first = solve_lp(prob)
            second = solve_lp(prob)
            assert first.status == second.status
            if first.x is not None:
                assert np.array_equal(first.x, second.x)
                assert first.objective_value == second.objective_value
                assert first.iterations == second.iterations

    def test_solutions_feasible_within_tolerance(self):
        rng = np.random.default_rng(11)
        for _ in range(60):
            prob = _random_lp(rng)
            sol = solve_lp(prob)
            if sol.status != OPTIMAL:
                continue
            x = sol.x
            assert np.all(x >= -FEASIBILITY_TOL)
            finite = np.isfinite(prob.upper)
            assert np.all(x[finite] <= prob.upper[finite] + FEASIBILITY_TOL)
            if prob.eq_rows.size:
                assert np.max(np.abs(prob.eq_rows @ x - prob.eq_rhs)) <= FEASIBILITY_TOL
            if prob.ineq_rows.size:
                assert np.max(prob.ineq_rows @ x - prob.ineq_rhs) <= FEASIBILITY_TOL

    def test_wide_lp_stays_lean(self):
        """Many box-bounded columns, two rows: the bound handling must not
        expand rows (a row per bound would OOM-scale quadratically)."""
        n = 4000
        rng = np.random.default_rng(3)
        c = rng.uniform(0.0, 1.0, size=n)
        sol = solve_lp(
            LinearProgram(
                objective=c,
                ineq_rows=np.ones((1, n)),
                ineq_rhs=[10.0],
                upper=np.full(n, 1.0),
            )
        )
        assert sol.status == OPTIMAL
        assert sol.objective_value == pytest.approx(
            np.sort(c)[-10:].sum(), abs=1e-6
        )
