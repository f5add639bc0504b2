import numpy as np
import pytest

from guardzone.analytic import InfeasibleWarning, p_con, p_energy, p_sec
from guardzone.game import (
    GridBoundaryWarning,
    StrategyGrid,
    best_response_lambda,
    best_response_rg,
    solve_nash,
    utility_primary,
    utility_secondary,
)


@pytest.fixture(scope="module")
def small_grid(baseline_params):
    # 16 points settle under both update rules at the baseline point;
    # some coarser grids orbit instead (see the cycle test below)
    return StrategyGrid.default(baseline_params.lambda_s_max, n=16)


def assert_mutual_best_response(params, grid, ne, slack=1e-12):
    """Exhaustive single-deviation check of a candidate equilibrium."""
    rg, lam = ne
    u1_star = utility_primary(rg, lam, params)
    for r in grid.rg_values:
        assert utility_primary(r, lam, params) <= u1_star + slack
    u2_star = utility_secondary(rg, lam, params)
    for cand in grid.lambda_values:
        assert utility_secondary(rg, cand, params) <= u2_star + slack


class TestStrategyGrid:
    def test_default_shape(self):
        g = StrategyGrid.default(2.0)
        assert g.rg_values.size == g.lambda_values.size == 64
        assert g.rg_values[0] == 0.0 and g.rg_values[-1] == 2.0
        assert g.lambda_values[0] == pytest.approx(2.0 / 64)
        assert g.lambda_values[-1] == 2.0

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            StrategyGrid([], [1.0])

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            StrategyGrid([0.0, np.inf], [1.0])

    def test_rejects_unsorted(self):
        with pytest.raises(ValueError):
            StrategyGrid([0.5, 0.2], [1.0])

    def test_rejects_negative_radius(self):
        with pytest.raises(ValueError):
            StrategyGrid([-0.1, 0.5], [1.0])

    def test_rejects_zero_density(self):
        with pytest.raises(ValueError):
            StrategyGrid([0.0, 0.5], [0.0, 1.0])


class TestUtilities:
    def test_primary_zero_when_secrecy_violated(self, baseline_params):
        # at the baseline point the secrecy constraint fails (0.69 < 0.8)
        assert p_sec(baseline_params) < baseline_params.epsilon
        assert utility_primary(baseline_params.r_g, baseline_params.lambda_s,
                               baseline_params) == 0.0

    def test_primary_equals_connection_when_feasible(self, baseline_params):
        relaxed = baseline_params.replace(epsilon=0.5)
        got = utility_primary(relaxed.r_g, relaxed.lambda_s, relaxed)
        assert got == pytest.approx(p_con(relaxed).value, rel=1e-12)

    def test_secondary_is_the_energy_metric(self, baseline_params):
        got = utility_secondary(0.5, 1.0, baseline_params)
        want = p_energy(baseline_params.replace(r_g=0.5, lambda_s=1.0))
        assert got == pytest.approx(want, rel=1e-12)


class TestBestResponses:
    def test_radius_response_is_deterministic(self, baseline_params, small_grid):
        a = best_response_rg(0.6, baseline_params, small_grid)
        b = best_response_rg(0.6, baseline_params, small_grid)
        assert a == b
        assert a in small_grid.rg_values

    def test_radius_response_maximizes_over_feasible_set(
            self, baseline_params, small_grid):
        star = best_response_rg(0.6, baseline_params, small_grid)
        u_star = utility_primary(star, 0.6, baseline_params)
        assert u_star > 0.0
        for r in small_grid.rg_values:
            assert utility_primary(r, 0.6, baseline_params) <= u_star + 1e-12

    def test_infeasible_target_warns_and_chases_secrecy(
            self, baseline_params, small_grid):
        strict = baseline_params.replace(epsilon=0.999999)
        with pytest.warns(InfeasibleWarning), \
                pytest.warns(GridBoundaryWarning):
            star = best_response_rg(0.6, strict, small_grid)
        # the fallback maximizes secrecy, which grows with the radius here
        secrecy = [p_sec(strict.replace(r_g=r, lambda_s=0.6))
                   for r in small_grid.rg_values]
        assert star == small_grid.rg_values[int(np.argmax(secrecy))]

    def test_boundary_response_warns(self, baseline_params):
        # a longer link pushes the connection peak past the grid edge, so
        # the response lands on the boundary and must say so
        p = baseline_params.replace(r_1=0.5, epsilon=1e-9)
        tight = StrategyGrid([0.0, 0.2, 0.4], [0.6])
        with pytest.warns(GridBoundaryWarning):
            star = best_response_rg(0.6, p, tight)
        assert star == 0.4

    def test_density_response_tie_prefers_smallest(self, baseline_params,
                                                   small_grid):
        # without transmitters every density harvests nothing: a full tie
        dead = baseline_params.replace(lambda_p=0.0)
        star = best_response_lambda(0.5, dead, small_grid)
        assert star == small_grid.lambda_values[0]

    def test_density_grid_must_respect_cap(self, baseline_params):
        over = StrategyGrid([0.0, 1.0], [1.0, 3.0])
        with pytest.raises(ValueError, match="lambda_s_max"):
            best_response_lambda(0.5, baseline_params, over)


class TestSolveNash:
    def test_baseline_converges_to_mutual_best_response(
            self, baseline_params, small_grid):
        trace = solve_nash(baseline_params, small_grid)
        assert trace.converged
        assert not trace.cycle_detected
        assert trace.ne_point is not None
        assert_mutual_best_response(baseline_params, small_grid,
                                    trace.ne_point)

    def test_trace_starts_from_open_access(self, baseline_params, small_grid):
        trace = solve_nash(baseline_params, small_grid)
        it0 = trace.iterations[0]
        assert it0[0] == 0
        assert it0[1] == 0.0
        assert it0[2] == baseline_params.lambda_s_max

    def test_free_energy_fixed_point(self, baseline_params, small_grid):
        # no harvesting requirement and an always-satisfied secrecy target:
        # the equilibrium is no guard zone and the full density cap
        easy = baseline_params.replace(e_min=0.0, epsilon=1e-9)
        trace = solve_nash(easy, small_grid)
        assert trace.converged
        assert trace.ne_point == (0.0, easy.lambda_s_max)
        assert trace.iterations[-1][0] <= 3

    def test_dead_primary_field_fixed_point(self, baseline_params):
        # without transmitters the harvesting utility ties at zero, so the
        # smallest density wins; secrecy is noise-limited and still binds
        grid = StrategyGrid.default(2.0, n=64)
        dead = baseline_params.replace(lambda_p=0.0)
        trace = solve_nash(dead, grid)
        assert trace.converged
        assert trace.ne_point == (0.0, grid.lambda_values[0])

    def test_sequential_update_also_converges(self, baseline_params,
                                              small_grid):
        trace = solve_nash(baseline_params, small_grid, update="sequential")
        assert trace.converged
        assert_mutual_best_response(baseline_params, small_grid,
                                    trace.ne_point)

    def test_iteration_budget_respected(self, baseline_params, small_grid):
        trace = solve_nash(baseline_params, small_grid, max_iter=1)
        assert not trace.converged
        assert trace.ne_point is None

    def test_coarse_grid_orbit_is_reported(self, baseline_params):
        # a 12-point grid makes the best-response dynamics revisit earlier
        # profiles instead of settling; that must surface as a cycle, not
        # as an exhausted iteration budget
        coarse = StrategyGrid.default(2.0, n=12)
        trace = solve_nash(baseline_params, coarse)
        assert trace.cycle_detected
        assert not trace.converged
        assert trace.ne_point is None
        assert trace.iterations[-1][0] < 50

    def test_unknown_update_rule(self, baseline_params, small_grid):
        with pytest.raises(ValueError, match="update"):
            solve_nash(baseline_params, small_grid, update="jacobi")
