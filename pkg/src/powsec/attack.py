"""Majority-attack cost, double-spend payoff, and deterrence conditions.

An attacker rents power_multiple times the honest network power for
duration_blocks block times. The blockchain is deterrence-compatible
when the attack cost covers the attack gain: the reward flow the
attacker forgoes by devaluing the coin plus the one-off payoff.

Two cost accountings are implemented. The default ("eq13") scales the
equipment-recovery credit by duration and attacker size along with the
flow costs; the "prose" variant credits the recoverable equipment value
once. They genuinely differ, so verdict objects record which was used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DataError, SolverError
from .mining import MarketState, MinerParams, per_miner_power

COST_FORMS = ("eq13", "prose")


@dataclass(frozen=True)
class AttackScenario:
    """Attack parameters; the payoff is either a fixed amount or derived
    from double-spending `double_spend_btc` coins at the prevailing price."""

    power_multiple: float
    duration_blocks: float
    recovery_share: float
    price_drop: float
    payoff: float | None = None
    double_spend_btc: float | None = None
    label: str = ""

    def __post_init__(self):
        if not self.power_multiple > 1.0:
            raise DataError("power multiple must exceed 1 (majority attack)")
        if not self.duration_blocks > 0:
            raise DataError("attack duration must be positive")
        if not 0.0 <= self.recovery_share <= 1.0:
            raise DataError("recovery share must be in [0, 1]")
        if not 0.0 <= self.price_drop <= 1.0:
            raise DataError("price drop must be in [0, 1]")
        if (self.payoff is None) == (self.double_spend_btc is None):
            raise DataError("give exactly one of payoff or double_spend_btc")
        if self.payoff is not None and self.payoff < 0:
            raise DataError("payoff must be non-negative")
        if self.double_spend_btc is not None and self.double_spend_btc < 0:
            raise DataError("double-spend amount must be non-negative")

    def payoff_at(self, expected_price: float) -> float:
        if self.payoff is not None:
            return self.payoff
        return double_spend_payoff(self.double_spend_btc, expected_price, self.price_drop)


@dataclass(frozen=True)
class AttackVerdict:
    """Outcome of a deterrence check: cost and gain sides plus the composite
    coefficient beta (negative when recoverable equipment outweighs the
    flow cost, flagged rather than clamped)."""

    cost: float
    gain: float
    compatible: bool
    beta: float
    form_used: str

    @property
    def beta_negative(self) -> bool:
        return self.beta < 0


def double_spend_payoff(amount_btc: float, expected_price: float, price_drop: float) -> float:
    """Value kept by a double-spender: price * amount * (1 - price_drop)."""
    if amount_btc < 0:
        raise DataError("double-spend amount must be non-negative")
    if expected_price < 0:
        raise DataError("price must be non-negative")
    if not 0.0 <= price_drop <= 1.0:
        raise DataError("price drop must be in [0, 1]")
    return expected_price * amount_btc * (1.0 - price_drop)


def _recovery_bracket(scenario: AttackScenario, params: MinerParams) -> float:
    """Flow cost net of the per-unit recovery credit: (c + q*delta) - (1-theta)q."""
    return params.running_cost - (1.0 - scenario.recovery_share) * params.equipment_price


def attack_cost(
    scenario: AttackScenario,
    params: MinerParams,
    market: MarketState,
    m: float,
    form: str = "eq13",
) -> float:
    """Cost of running the attack against total honest power n*m.

    form="eq13": s*A*n*m*[(c + q*delta) - (1-theta)*q]
    form="prose": s*A*n*m*(c + q*delta) - (1-theta)*q*n*m
    """
    if form not in COST_FORMS:
        raise DataError(f"cost form must be one of {COST_FORMS}")
    if m < 0:
        raise DataError("power must be non-negative")
    s, a = scenario.duration_blocks, scenario.power_multiple
    network = market.n_miners * m
    if form == "eq13":
        return s * a * network * _recovery_bracket(scenario, params)
    recovery = (1.0 - scenario.recovery_share) * params.equipment_price * network
    return s * a * network * params.running_cost - recovery


def attack_gain(scenario: AttackScenario, market: MarketState) -> float:
    """Forfeited-reward term plus the attack payoff: (1-drop)*s*E(p)R + V."""
    return (
        (1.0 - scenario.price_drop) * scenario.duration_blocks * market.reward_value
        + scenario.payoff_at(market.expected_price)
    )


def beta_coefficient(scenario: AttackScenario, params: MinerParams, market: MarketState) -> float:
    """Composite deterrence coefficient: A*n*bracket*[gamma(n-1)/n^2 / unit_cost]^(1/(1-gamma))."""
    n = market.n_miners
    kernel = params.gamma * (n - 1.0) / (n * n) / params.unit_cost
    scale = kernel ** (1.0 / (1.0 - params.gamma))
    return scenario.power_multiple * n * _recovery_bracket(scenario, params) * scale


def incentive_compatible(
    scenario: AttackScenario,
    params: MinerParams,
    market: MarketState,
    form: str = "eq13",
) -> AttackVerdict:
    """Deterrence check in cost/gain form with equilibrium honest power."""
    m = per_miner_power(params, market)
    cost = attack_cost(scenario, params, market, m, form=form)
    gain = attack_gain(scenario, market)
    return AttackVerdict(
        cost=cost,
        gain=gain,
        compatible=cost >= gain,
        beta=beta_coefficient(scenario, params, market),
        form_used=form,
    )


def incentive_compatible_reduced(
    scenario: AttackScenario,
    params: MinerParams,
    market: MarketState,
) -> AttackVerdict:
    """Deterrence check in the reduced (reward-value) form.

    Evaluates {V^(gamma/(1-gamma)) - (1-drop)/beta} * s * V >= payoff/beta
    with V the reward value; the inequality flips when beta < 0. Verdicts
    agree with the cost/gain form whenever honest power is at equilibrium.
    """
    beta = beta_coefficient(scenario, params, market)
    if beta == 0.0:
        raise DataError("beta is zero: reduced form undefined")
    value = market.reward_value
    gamma = params.gamma
    lhs = (
        value ** (gamma / (1.0 - gamma)) - (1.0 - scenario.price_drop) / beta
    ) * scenario.duration_blocks * value
    rhs = scenario.payoff_at(market.expected_price) / beta
    compatible = lhs >= rhs if beta > 0 else lhs <= rhs
    cost = attack_cost(
        scenario, params, market, per_miner_power(params, market), form="eq13"
    )
    return AttackVerdict(
        cost=cost,
        gain=attack_gain(scenario, market),
        compatible=compatible,
        beta=beta,
        form_used="eq14",
    )


def min_deterrence_reward(
    scenario: AttackScenario,
    params: MinerParams,
    n_miners: float,
    reward_btc: float = 1.0,
    value_cap: float = 1e15,
) -> float:
    """Smallest reward value E(p)R above which the attack stays deterred.

    Sweeps the reward value with the miner count fixed; price-linked
    payoffs (double_spend_btc given) move with it via E(p) = value / R.
    Returns 0.0 when every positive value is already deterred and +inf
    when none below value_cap is. A condition that flips sign more than
    once over the sweep is reported as non-monotone.
    """
    if beta_coefficient(scenario, params, MarketState(1.0, 1.0, n_miners)) <= 0:
        return math.inf

    def margin(value: float) -> float:
        market = MarketState(value / reward_btc, reward_btc, n_miners)
        m = per_miner_power(params, market)
        return attack_cost(scenario, params, market, m) - attack_gain(scenario, market)

    grid = [value_cap * 0.5**j for j in range(120)][::-1]
    signs = [margin(v) >= 0 for v in grid]
    if all(signs):
        return 0.0
    if not signs[-1]:
        return math.inf
    flips = [i for i in range(1, len(signs)) if signs[i] != signs[i - 1]]
    if len(flips) != 1 or not signs[flips[0]]:
        raise SolverError("deterrence condition is not monotone over the sweep")
    lo, hi = grid[flips[0] - 1], grid[flips[0]]
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if margin(mid) >= 0:
            hi = mid
        else:
            lo = mid
        if hi - lo <= 1e-12 * hi:
            break
    return hi
