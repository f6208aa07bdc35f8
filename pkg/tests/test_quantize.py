import numpy as np
import pytest

from wsnpower import game, quantize as quantize_mod
from wsnpower.quantize import (
    DiscreteLevelSet,
    RegisterMap,
    discrete_best_response,
    discretize_profile,
    quantize,
    solve_discrete,
    to_register,
)
from conftest import N0, build_desk, random_profile


class TestLevelSet:
    def test_default_grid_sizes(self):
        assert len(DiscreteLevelSet().levels_dbm) == 25
        assert DiscreteLevelSet().levels_dbm[0] == -24.0
        assert DiscreteLevelSet().levels_dbm[-1] == 0.0
        wide = DiscreteLevelSet.one_db_grid(include_floor=True)
        assert len(wide.levels_dbm) == 26
        assert wide.levels_dbm[0] == -25.0

    def test_validation(self):
        with pytest.raises(ValueError):
            DiscreteLevelSet(())
        with pytest.raises(ValueError):
            DiscreteLevelSet((-5.0, -5.0))
        with pytest.raises(ValueError):
            DiscreteLevelSet((-26.0, 0.0))
        with pytest.raises(ValueError):
            DiscreteLevelSet((-5.0, 0.5))

    def test_json_round_trip(self):
        levels = DiscreteLevelSet((-20.0, -10.0, -3.0, 0.0))
        assert DiscreteLevelSet.from_json_dict(levels.to_json_dict()) == levels


class TestQuantize:
    def test_nearest_and_tie_break(self):
        levels = DiscreteLevelSet()
        assert quantize(-12.4, levels) == -12.0
        assert quantize(-12.6, levels) == -13.0
        # exact midpoint resolves toward the lower (cheaper) level
        assert quantize(-12.5, levels) == -13.0

    def test_grid_points_are_fixed(self):
        levels = DiscreteLevelSet()
        for v in levels.levels_dbm:
            assert quantize(v, levels) == v

    def test_clamps_out_of_range_inputs(self):
        levels = DiscreteLevelSet.one_db_grid(include_floor=True)
        assert quantize(-40.0, levels) == -25.0
        assert quantize(3.0, levels) == 0.0

    def test_scalar_and_array_forms(self):
        levels = DiscreteLevelSet()
        out = quantize(np.array([-12.4, -0.2]), levels)
        assert isinstance(out, np.ndarray)
        assert np.array_equal(out, [-12.0, 0.0])
        assert isinstance(quantize(-12.4, levels), float)

    def test_error_bound_over_grid_span(self):
        levels = DiscreteLevelSet()
        rng = np.random.default_rng(21)
        samples = rng.uniform(levels.levels_dbm[0], levels.levels_dbm[-1], 10000)
        err = np.abs(quantize(samples, levels) - samples)
        assert np.max(err) <= 0.5

    def test_idempotent_and_monotone(self):
        levels = DiscreteLevelSet((-22.0, -13.5, -6.0, -1.0))
        rng = np.random.default_rng(22)
        samples = np.sort(rng.uniform(-30.0, 5.0, 2000))
        q = quantize(samples, levels)
        assert np.array_equal(quantize(q, levels), q)
        assert np.all(np.diff(q) >= 0.0)

    def test_single_level_set(self):
        levels = DiscreteLevelSet((-7.0,))
        assert quantize(-24.0, levels) == -7.0
        assert quantize(0.0, levels) == -7.0


class TestDiscretizeProfile:
    def test_on_grid_profile_unchanged(self):
        levels = DiscreteLevelSet()
        prof = game.StrategyProfile(np.array([1.0, 13.0, 25.0]))
        out = discretize_profile(prof, levels)
        assert np.array_equal(out.s, prof.s)

    def test_rounds_to_nearest_level(self):
        levels = DiscreteLevelSet()
        prof = game.StrategyProfile(np.array([23.75, 11.4]))  # -1.25, -13.6 dB
        out = discretize_profile(prof, levels)
        assert np.array_equal(out.dbm, [-1.0, -14.0])

    def test_per_node_error_bounded(self):
        levels = DiscreteLevelSet()
        rng = np.random.default_rng(23)
        for _ in range(50):
            prof = random_profile(rng, 10)
            out = discretize_profile(prof, levels)
            assert np.max(np.abs(out.dbm - prof.dbm)) <= 0.5 + 1e-12
            assert out.s_min == prof.s_min and out.s_max == prof.s_max

    def test_respects_profile_bounds(self):
        # the -25 dB floor level maps to s=0, below s_min, so it is dropped
        levels = DiscreteLevelSet.one_db_grid(include_floor=True)
        prof = game.StrategyProfile(np.array([0.5, 0.6]))
        out = discretize_profile(prof, levels)
        assert np.array_equal(out.s, [1.0, 1.0])
        with pytest.raises(ValueError):
            discretize_profile(game.StrategyProfile(np.array([5.0]), s_min=4.9, s_max=5.1),
                               DiscreteLevelSet((-25.0, 0.0)))


class TestDiscreteBestResponse:
    def test_penalty_branch_picks_lowest_level(self):
        gains = np.zeros((3, 3))
        prof = game.StrategyProfile.full_power(3)
        br = discrete_best_response(0, prof, gains, N0, game.GameParams(), DiscreteLevelSet())
        assert br == -24.0

    def test_single_node_picks_lowest_level(self):
        prof = game.StrategyProfile(np.array([20.0]))
        br = discrete_best_response(0, prof, np.zeros((1, 1)), N0,
                                    game.GameParams(), DiscreteLevelSet())
        assert br == -24.0

    def test_matches_exhaustive_argmax(self):
        rng = np.random.default_rng(24)
        levels = DiscreteLevelSet()
        params = game.GameParams()
        for seed in (0, 1, 2):
            _, gains = build_desk(seed)
            prof = random_profile(rng, 10)
            for i in range(10):
                br = discrete_best_response(i, prof, gains, N0, params, levels)
                best_dbm, best_val = None, -np.inf
                for level in levels.levels_dbm:
                    val = game.utility(i, prof.with_power(i, level + 25.0), gains, N0, params)
                    if val > best_val:
                        best_dbm, best_val = level, val
                assert br == best_dbm


class TestSolveDiscrete:
    def test_terminates_and_fixes_point(self, desk0):
        _, gains = desk0
        levels = DiscreteLevelSet()
        params = game.GameParams()
        result = solve_discrete(game.StrategyProfile.full_power(10), gains, N0, params, levels)
        assert result.converged
        assert result.sweeps_used <= params.n_iter_max
        assert result.nonunimodal_events == 0
        # every power sits on the grid and is its own discrete best response
        for i in range(10):
            assert result.profile.dbm[i] in levels.levels_dbm
            br = discrete_best_response(i, result.profile, gains, N0, params, levels)
            assert br == result.profile.dbm[i]

    def test_potential_never_decreases(self, desk0):
        _, gains = desk0
        rng = np.random.default_rng(25)
        params = game.GameParams()
        for _ in range(5):
            prof = random_profile(rng, 10)
            result = solve_discrete(prof, gains, N0, params, DiscreteLevelSet())
            trace = result.potential_trace
            assert all(b >= a - 1e-12 for a, b in zip(trace, trace[1:]))

    def test_initial_profile_is_discretized(self, desk0):
        _, gains = desk0
        prof = game.StrategyProfile(np.full(10, 11.3))
        result = solve_discrete(prof, gains, N0, game.GameParams(), DiscreteLevelSet())
        start = result.profile_trace[0]
        assert np.array_equal(start, np.full(10, 11.0))


class TestRegisterMap:
    def test_validation(self):
        with pytest.raises(ValueError):
            RegisterMap(())
        with pytest.raises(ValueError):
            RegisterMap(((-10.0, 4), (-10.0, 8)))
        with pytest.raises(ValueError):
            RegisterMap(((-10.0, 8), (-5.0, 4)))  # ids must rise with power

    def test_linear_builder(self):
        levels = DiscreteLevelSet((-20.0, -10.0, 0.0))
        rmap = RegisterMap.linear(levels, id_start=2, id_step=3)
        assert rmap.pairs == ((-20.0, 2), (-10.0, 5), (0.0, 8))

    def test_eight_level_default(self):
        rmap = RegisterMap.eight_level_default()
        assert [d for d, _ in rmap.pairs] == [-25.0, -15.0, -10.0, -7.0, -5.0, -3.0, -1.0, 0.0]
        assert [r for _, r in rmap.pairs] == [3, 7, 11, 15, 19, 23, 27, 31]

    def test_json_round_trip(self):
        rmap = RegisterMap.eight_level_default()
        assert RegisterMap.from_json_dict(rmap.to_json_dict()) == rmap


class TestToRegister:
    def test_table_entries_map_exactly(self):
        rmap = RegisterMap.eight_level_default()
        for d, r in rmap.pairs:
            assert to_register(d, rmap) == r

    def test_snaps_between_entries(self):
        rmap = RegisterMap.eight_level_default()
        assert to_register(-0.4, rmap) == 31
        assert to_register(-2.9, rmap) == 23
        # -2.0 is the exact -3/-1 midpoint: resolves to the lower level
        assert to_register(-2.0, rmap) == 23

    def test_outside_domain_raises(self):
        rmap = RegisterMap.eight_level_default()
        with pytest.raises(ValueError):
            to_register(-25.5, rmap)
        with pytest.raises(ValueError):
            to_register(0.5, rmap)

    def test_monotone_in_power(self):
        rmap = RegisterMap.eight_level_default()
        probe = np.linspace(-25.0, 0.0, 501)
        ids = [to_register(v, rmap) for v in probe]
        assert all(b >= a for a, b in zip(ids, ids[1:]))


def test_module_accessible_despite_function_reexport():
    # the package exports the quantize *function* at top level; the module
    # remains importable under its own name
    import wsnpower.quantize as qmod
    assert qmod is quantize_mod
    assert callable(quantize)