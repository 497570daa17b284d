import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from powsec.errors import DataError, SolverError
from powsec.mining import (
    MarketState,
    MinerParams,
    equilibrium,
    foc_residual,
    gamma_from_elasticity,
    integer_entry_report,
    per_miner_power,
    reward_elasticity,
    solve_free_entry,
    steady_state_profit,
    total_power,
    win_probability,
)

WORKED_PARAMS = MinerParams(
    gamma=0.5, variable_cost=1.0, discount_rate=0.05, depreciation=0.1, equipment_price=10.0
)
WORKED_MARKET = MarketState(expected_price=100.0, reward_btc=1.0, n_miners=2.0)


def contest_profit(m, others, gamma, reward_value, unit_cost):
    """Independent per-period payoff of one miner against fixed rivals."""
    weights = [math.exp(m**gamma)] + [math.exp(o**gamma) for o in others]
    return weights[0] / sum(weights) * reward_value - unit_cost * m


def golden_max(fn, lo, hi, tol=1e-10):
    phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c, d = b - phi * (b - a), a + phi * (b - a)
    while b - a > tol:
        if fn(c) > fn(d):
            b, d = d, c
            c = b - phi * (b - a)
        else:
            a, c = c, d
            d = a + phi * (b - a)
    return 0.5 * (a + b)


class TestWinProbability:
    def test_equal_powers_symmetric(self):
        for n in (1, 2, 5, 11):
            p = win_probability([3.0] * n, gamma=0.5, i=0)
            assert p == pytest.approx(1.0 / n, abs=1e-14)

    def test_gamma_one_hand_value(self):
        p = win_probability([1.0, 2.0], gamma=1.0, i=0)
        assert p == pytest.approx(1.0 / (1.0 + math.e), abs=1e-12)

    def test_zero_power_entrant_keeps_unit_weight(self):
        p = win_probability([0.0, 1.0], gamma=0.5, i=0)
        assert p == pytest.approx(1.0 / (1.0 + math.e), abs=1e-12)

    def test_learning_by_mining_odds_grow_with_scale(self):
        gamma = 0.6
        base = [2.0, 1.0]
        for scale in (1.5, 3.0, 10.0):
            small = win_probability(base, gamma, 0) / win_probability(base, gamma, 1)
            scaled = [scale * v for v in base]
            big = win_probability(scaled, gamma, 0) / win_probability(scaled, gamma, 1)
            assert big > small

    @given(st.lists(st.floats(0.0, 50.0), min_size=1, max_size=12),
           st.floats(0.05, 1.0))
    @settings(max_examples=150, deadline=None)
    def test_probabilities_sum_to_one(self, powers, gamma):
        total = sum(win_probability(powers, gamma, i) for i in range(len(powers)))
        assert abs(total - 1.0) <= 1e-12

    def test_errors(self):
        with pytest.raises(DataError):
            win_probability([], 0.5, 0)
        with pytest.raises(DataError):
            win_probability([-1.0], 0.5, 0)
        with pytest.raises(DataError):
            win_probability([1.0], 1.5, 0)

    def test_overflow_safe(self):
        p = win_probability([1e6, 2e6], gamma=0.9, i=1)
        assert p == pytest.approx(1.0, abs=1e-9)


class TestEquilibriumPower:
    def test_worked_point(self):
        assert per_miner_power(WORKED_PARAMS, WORKED_MARKET) == pytest.approx(25.0, abs=1e-12)
        assert total_power(WORKED_PARAMS, WORKED_MARKET) == pytest.approx(50.0, abs=1e-10)

    def test_worked_point_against_best_response_oracle(self):
        unit_cost = WORKED_PARAMS.unit_cost
        m_star = per_miner_power(WORKED_PARAMS, WORKED_MARKET)
        best = golden_max(
            lambda m: contest_profit(m, [m_star], 0.5, 100.0, unit_cost), 1e-9, 200.0
        )
        assert best == pytest.approx(m_star, abs=1e-6)

    def test_zero_reward_or_single_miner(self):
        assert per_miner_power(WORKED_PARAMS, MarketState(0.0, 1.0, 2.0)) == 0.0
        assert per_miner_power(WORKED_PARAMS, MarketState(100.0, 1.0, 1.0)) == 0.0
        assert total_power(WORKED_PARAMS, MarketState(0.0, 1.0, 2.0)) == 0.0

    def test_total_equals_n_times_per_miner(self, rng):
        for _ in range(300):
            params = MinerParams(
                gamma=rng.uniform(0.1, 0.9),
                variable_cost=rng.uniform(0.01, 10),
                discount_rate=rng.uniform(0.001, 0.2),
                depreciation=rng.uniform(0.0, 0.5),
                equipment_price=rng.uniform(0.1, 50),
            )
            market = MarketState(rng.uniform(1, 1e4), rng.uniform(0.1, 50), rng.uniform(2, 100))
            total = total_power(params, market)
            split = market.n_miners * per_miner_power(params, market)
            assert total == pytest.approx(split, rel=1e-12)

    def test_doubling_reward_scales_by_elasticity(self):
        base = total_power(WORKED_PARAMS, WORKED_MARKET)
        doubled = total_power(WORKED_PARAMS, MarketState(200.0, 1.0, 2.0))
        assert doubled == pytest.approx(4.0 * base, rel=1e-12)

    def test_comparative_statics_signs(self):
        eps = 1e-6
        base = per_miner_power(WORKED_PARAMS, WORKED_MARKET)
        up_reward = per_miner_power(WORKED_PARAMS, MarketState(100.0 + eps, 1.0, 2.0))
        assert up_reward > base
        for field, direction in (
            ("variable_cost", -1), ("equipment_price", -1),
            ("discount_rate", -1), ("depreciation", -1),
        ):
            kwargs = dict(gamma=0.5, variable_cost=1.0, discount_rate=0.05,
                          depreciation=0.1, equipment_price=10.0)
            kwargs[field] += eps
            bumped = per_miner_power(MinerParams(**kwargs), WORKED_MARKET)
            assert direction * (bumped - base) > 0, field


class TestProfitAndFoc:
    def test_profit_hand_example(self):
        profit = steady_state_profit(WORKED_PARAMS, WORKED_MARKET, 25.0)
        assert profit == pytest.approx(0.0, abs=1e-12)

    def test_profit_all_zero(self):
        params = MinerParams(gamma=0.5, variable_cost=0.0, discount_rate=0.05,
                             depreciation=0.0, equipment_price=1.0)
        market = MarketState(0.0, 0.0, 3.0)
        assert steady_state_profit(params, market, 0.0) == 0.0

    def test_foc_zero_at_equilibrium(self):
        m = per_miner_power(WORKED_PARAMS, WORKED_MARKET)
        residual = foc_residual(WORKED_PARAMS, WORKED_MARKET, m)
        assert abs(residual) <= 1e-10 * WORKED_PARAMS.unit_cost

    def test_foc_sign_sweep(self):
        m = per_miner_power(WORKED_PARAMS, WORKED_MARKET)
        for factor in (0.2, 0.5, 0.9):
            assert foc_residual(WORKED_PARAMS, WORKED_MARKET, factor * m) > 0
        for factor in (1.1, 2.0, 5.0):
            assert foc_residual(WORKED_PARAMS, WORKED_MARKET, factor * m) < 0

    def test_foc_zero_reward(self):
        residual = foc_residual(WORKED_PARAMS, MarketState(0.0, 1.0, 2.0), 5.0)
        assert residual == pytest.approx(-WORKED_PARAMS.unit_cost)

    def test_foc_requires_positive_power(self):
        with pytest.raises(DataError):
            foc_residual(WORKED_PARAMS, WORKED_MARKET, 0.0)

    def test_equilibrium_state_fields(self):
        state = equilibrium(WORKED_PARAMS, WORKED_MARKET)
        assert state.shadow_price == (1.0 + 0.05) * 10.0
        assert state.total_power == state.m_per_miner * 2.0


class TestFreeEntry:
    def test_zero_profit_at_solution(self):
        params = MinerParams(gamma=0.5, variable_cost=1.0, discount_rate=0.05,
                             depreciation=0.1, equipment_price=10.0, fixed_cost=50.0)
        solution = solve_free_entry(params, 100.0, 1.0)
        assert abs(solution.profit) <= 1e-8 * 100.0
        market = MarketState(100.0, 1.0, solution.n_miners)
        m = per_miner_power(params, market)
        assert m == pytest.approx(solution.m_per_miner, rel=1e-10)
        # the fixed-point identity n = V / (rho F + running_cost * m)
        implied_n = 100.0 / (0.05 * 50.0 + params.running_cost * m)
        assert implied_n == pytest.approx(solution.n_miners, rel=1e-6)

    def test_unsolvable_bracket_reports_residuals(self):
        params = MinerParams(gamma=0.5, variable_cost=1.0, discount_rate=0.05,
                             depreciation=0.1, equipment_price=10.0, fixed_cost=1e9)
        with pytest.raises(SolverError, match="bracket"):
            solve_free_entry(params, 100.0, 1.0)

    def test_zero_fixed_cost_needs_explicit_bracket(self):
        with pytest.raises(SolverError, match="n_max"):
            solve_free_entry(WORKED_PARAMS, 100.0, 1.0)

    def test_zero_fixed_cost_with_explicit_bracket(self):
        # the worked point is itself a zero-profit point at n=2
        solution = solve_free_entry(WORKED_PARAMS, 100.0, 1.0, n_max=4.0)
        assert solution.n_miners == pytest.approx(2.0, abs=1e-6)
        assert abs(solution.profit) <= 1e-8 * 100.0

    def test_reward_scaling_substitution_identity(self):
        # with F=0 the returned pair must satisfy n = V / (running_cost * m*(n))
        # at every reward scale (the root itself moves with the scale)
        for value in (100.0, 300.0, 1000.0):
            solution = solve_free_entry(WORKED_PARAMS, value, 1.0, n_max=4.0)
            implied_n = value / (WORKED_PARAMS.running_cost * solution.m_per_miner)
            assert implied_n == pytest.approx(solution.n_miners, rel=1e-6)
            market = MarketState(value, 1.0, solution.n_miners)
            assert per_miner_power(WORKED_PARAMS, market) == pytest.approx(
                solution.m_per_miner, rel=1e-12)

    def test_zero_reward_rejected(self):
        with pytest.raises(SolverError, match="positive reward"):
            solve_free_entry(WORKED_PARAMS, 0.0, 1.0)

    def test_integer_report(self):
        params = MinerParams(gamma=0.5, variable_cost=1.0, discount_rate=0.05,
                             depreciation=0.1, equipment_price=10.0, fixed_cost=50.0)
        solution = solve_free_entry(params, 100.0, 1.0)
        report = integer_entry_report(params, solution, 100.0, 1.0)
        assert report["n_integer"] == math.floor(report["n_real"])
        assert report["profit_at_integer"] >= -1e-9 or report["n_integer"] >= 1


class TestElasticity:
    def test_half_gamma_gives_two(self):
        assert reward_elasticity(0.5) == 2.0

    def test_inverse_round_trip(self):
        assert gamma_from_elasticity(1.4) == pytest.approx(1.0 - 1.0 / 1.4)
        for gamma in (0.1, 0.3, 0.7):
            assert gamma_from_elasticity(reward_elasticity(gamma)) == pytest.approx(gamma)

    def test_elasticity_below_one_rejected(self):
        with pytest.raises(DataError):
            gamma_from_elasticity(1.0)

    def test_numeric_log_derivative_matches(self):
        for gamma in (0.2, 0.5, 0.8):
            params = MinerParams(gamma=gamma, variable_cost=1.0, discount_rate=0.05,
                                 depreciation=0.1, equipment_price=10.0)
            h = 1e-6
            up = math.log(total_power(params, MarketState(100.0 * math.exp(h), 1.0, 3.0)))
            down = math.log(total_power(params, MarketState(100.0 * math.exp(-h), 1.0, 3.0)))
            numeric = (up - down) / (2.0 * h)
            assert numeric == pytest.approx(1.0 / (1.0 - gamma), abs=1e-6)


class TestValidation:
    def test_gamma_range(self):
        with pytest.raises(DataError):
            MinerParams(gamma=1.0, variable_cost=1.0, discount_rate=0.05,
                        depreciation=0.1, equipment_price=10.0)

    def test_unit_cost_must_be_positive(self):
        with pytest.raises(DataError):
            MinerParams(gamma=0.5, variable_cost=0.0, discount_rate=0.05,
                        depreciation=0.0, equipment_price=0.0)

    def test_market_invariants(self):
        with pytest.raises(DataError):
            MarketState(-1.0, 1.0, 2.0)
        with pytest.raises(DataError):
            MarketState(1.0, 1.0, 0.5)
