"""Steady-state mining equilibrium with learning-by-mining contest odds.

A miner's chance of winning a block is exp(m^gamma) relative to the same
weight summed over all miners, so bigger rigs enjoy disproportionate
odds. In the symmetric steady state the per-miner power solves

    m* = [ gamma (n-1)/n^2 * reward_value / unit_cost ]^(1/(1-gamma))

where reward_value = expected_price * reward_btc and unit_cost is the
flow cost of one power unit, variable_cost + (discount_rate +
depreciation) * equipment_price. Free entry drives per-period profit to
zero and pins down the miner count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DataError, SolverError

#: bisection controls shared by the solvers in this module
MAX_BISECTION_ITER = 200
PROFIT_RTOL = 1e-8


@dataclass(frozen=True)
class MinerParams:
    """Technology and cost parameters of a representative miner.

    equipment_efficiency is carried as a label only: the theory folds
    efficiency into the price and running cost of a power unit.
    """

    gamma: float
    variable_cost: float
    discount_rate: float
    depreciation: float
    equipment_price: float
    fixed_cost: float = 0.0
    equipment_efficiency: float | None = None

    def __post_init__(self):
        if not 0.0 < self.gamma < 1.0:
            raise DataError(f"gamma must be in (0, 1), got {self.gamma}")
        if self.variable_cost < 0 or self.equipment_price < 0 or self.fixed_cost < 0:
            raise DataError("costs must be non-negative")
        if not 0.0 <= self.depreciation <= 1.0:
            raise DataError("depreciation must be in [0, 1]")
        if not self.discount_rate > 0:
            raise DataError("discount rate must be positive")
        if not self.unit_cost > 0:
            raise DataError("flow cost per power unit must be positive")

    @property
    def unit_cost(self) -> float:
        """Per-period flow cost of holding one unit of power."""
        return self.variable_cost + (self.discount_rate + self.depreciation) * self.equipment_price

    @property
    def running_cost(self) -> float:
        """Energy plus replacement investment per power unit (no financing)."""
        return self.variable_cost + self.depreciation * self.equipment_price


@dataclass(frozen=True)
class MarketState:
    """Market-side state: expected coin price, block reward, miner count."""

    expected_price: float
    reward_btc: float
    n_miners: float

    def __post_init__(self):
        if self.expected_price < 0 or self.reward_btc < 0:
            raise DataError("price and reward must be non-negative")
        if not self.n_miners >= 1:
            raise DataError("miner count must be >= 1")

    @property
    def reward_value(self) -> float:
        return self.expected_price * self.reward_btc


@dataclass(frozen=True)
class EquilibriumState:
    """Solved symmetric equilibrium at a given market state."""

    m_per_miner: float
    total_power: float
    shadow_price: float
    zero_profit_residual: float


def win_probability(powers, gamma: float, i: int) -> float:
    """Contest win probability exp(m_i^gamma) / sum_j exp(m_j^gamma).

    gamma = 1 is accepted here (plain exponential weights); note a
    zero-power entrant still carries weight exp(0) = 1.
    """
    powers = np.asarray(powers, dtype=np.float64)
    if powers.size == 0:
        raise DataError("need at least one miner")
    if (powers < 0).any():
        raise DataError("negative power")
    if not 0.0 < gamma <= 1.0:
        raise DataError(f"gamma must be in (0, 1], got {gamma}")
    if not 0 <= i < powers.size:
        raise DataError(f"miner index {i} out of range")
    weights = powers**gamma
    weights -= weights.max()  # log-sum-exp shift
    expw = np.exp(weights)
    return float(expw[i] / expw.sum())


def per_miner_power(params: MinerParams, market: MarketState) -> float:
    """Symmetric steady-state power per miner; zero at n=1 or zero reward."""
    n = market.n_miners
    base = params.gamma * (n - 1.0) / (n * n) * market.reward_value / params.unit_cost
    if base <= 0.0:
        return 0.0
    return base ** (1.0 / (1.0 - params.gamma))


def total_power(params: MinerParams, market: MarketState) -> float:
    """Total network power n*m, in the closed form grouped over n.

    Evaluates (1/n)^((1+gamma)/(1-gamma)) [gamma (n-1) V / u]^(1/(1-gamma))
    directly; agrees with n * per_miner_power to machine precision, which
    the test-suite checks as an identity.
    """
    n = market.n_miners
    inner = params.gamma * (n - 1.0) * market.reward_value / params.unit_cost
    if inner <= 0.0:
        return 0.0
    expo = 1.0 / (1.0 - params.gamma)
    return (1.0 / n) ** ((1.0 + params.gamma) * expo) * inner**expo


def steady_state_profit(params: MinerParams, market: MarketState, m: float) -> float:
    """Per-period profit at symmetric power m: expected reward share minus
    energy, replacement investment, and the annuitized fixed cost."""
    if m < 0:
        raise DataError("power must be non-negative")
    return (
        market.reward_value / market.n_miners
        - params.running_cost * m
        - params.discount_rate * params.fixed_cost
    )


def foc_residual(params: MinerParams, market: MarketState, m: float) -> float:
    """Stationarity residual of the miner's problem at symmetric power m.

    gamma m^(gamma-1) (n-1)/n^2 * reward_value - unit_cost; zero exactly
    at the equilibrium power, positive below it, negative above.
    """
    if not m > 0:
        raise DataError("power must be positive")
    n = market.n_miners
    marginal_odds = params.gamma * m ** (params.gamma - 1.0) * (n - 1.0) / (n * n)
    return marginal_odds * market.reward_value - params.unit_cost


def equilibrium(params: MinerParams, market: MarketState) -> EquilibriumState:
    """Solve the symmetric equilibrium and package the state."""
    m = per_miner_power(params, market)
    return EquilibriumState(
        m_per_miner=m,
        total_power=market.n_miners * m,
        shadow_price=(1.0 + params.discount_rate) * params.equipment_price,
        zero_profit_residual=steady_state_profit(params, market, m),
    )


@dataclass(frozen=True)
class FreeEntrySolution:
    n_miners: float
    m_per_miner: float
    profit: float
    iterations: int


def solve_free_entry(
    params: MinerParams,
    expected_price: float,
    reward_btc: float,
    n_max: float | None = None,
) -> FreeEntrySolution:
    """Miner count n* at which entry stops (zero per-period profit).

    Bisects the zero-profit residual over n in [1+1e-6, n_max]; the
    default upper end is reward_value / (discount_rate * fixed_cost),
    where the reward share alone can no longer cover the fixed cost.
    """
    reward_value = expected_price * reward_btc
    if not reward_value > 0:
        raise SolverError("free entry needs a positive reward value")

    def profit_at(n: float) -> float:
        market = MarketState(expected_price, reward_btc, n)
        return steady_state_profit(params, market, per_miner_power(params, market))

    lo = 1.0 + 1e-6
    if n_max is None:
        annuity = params.discount_rate * params.fixed_cost
        if annuity <= 0:
            raise SolverError(
                "no finite bracket: with zero fixed cost the zero-profit "
                "condition has no guaranteed root; pass n_max explicitly"
            )
        n_max = reward_value / annuity
    hi = float(n_max)
    if hi <= lo:
        raise SolverError(f"upper bracket {hi} not above {lo}")
    f_lo, f_hi = profit_at(lo), profit_at(hi)
    if f_lo == 0.0:
        return FreeEntrySolution(lo, per_miner_power(params, MarketState(expected_price, reward_btc, lo)), 0.0, 0)
    if f_lo * f_hi > 0:
        raise SolverError(
            "no sign change in the free-entry bracket: "
            f"profit({lo:g}) = {f_lo:g}, profit({hi:g}) = {f_hi:g}"
        )
    tol = PROFIT_RTOL * reward_value
    mid, f_mid = lo, f_lo
    for iteration in range(1, MAX_BISECTION_ITER + 1):
        mid = 0.5 * (lo + hi)
        f_mid = profit_at(mid)
        if abs(f_mid) <= tol or (hi - lo) <= 1e-12 * max(1.0, mid):
            m = per_miner_power(params, MarketState(expected_price, reward_btc, mid))
            return FreeEntrySolution(mid, m, f_mid, iteration)
        if f_lo * f_mid <= 0:
            hi, f_hi = mid, f_mid
        else:
            lo, f_lo = mid, f_mid
    raise SolverError(
        f"free-entry bisection did not converge after {MAX_BISECTION_ITER} "
        f"iterations (last residual {f_mid:g})"
    )


def reward_elasticity(gamma: float) -> float:
    """Long-run elasticity of total power w.r.t. the reward value: 1/(1-gamma)."""
    if not 0.0 < gamma < 1.0:
        raise DataError(f"gamma must be in (0, 1), got {gamma}")
    return 1.0 / (1.0 - gamma)


def gamma_from_elasticity(elasticity: float) -> float:
    """Inverse of reward_elasticity; only elasticities above 1 are attainable."""
    if not elasticity > 1.0:
        raise DataError(f"elasticity must exceed 1, got {elasticity}")
    return 1.0 - 1.0 / elasticity


def integer_entry_report(params: MinerParams, solution: FreeEntrySolution,
                         expected_price: float, reward_btc: float) -> dict:
    """Round the free-entry count down and report profits at both counts."""
    n_floor = max(1.0, math.floor(solution.n_miners))
    market = MarketState(expected_price, reward_btc, n_floor)
    profit_floor = steady_state_profit(params, market, per_miner_power(params, market))
    return {
        "n_real": solution.n_miners,
        "n_integer": int(n_floor),
        "profit_at_real": solution.profit,
        "profit_at_integer": profit_floor,
    }
