"""
Cooperative games derived from a linear-demand oligopoly.

Firms 0..n-1 have constant marginal costs c_0 < c_1 < ... and face inverse
demand p(Q) = a - bQ. A cartel produces at its cheapest member's cost. Worth
values are exact rationals; floating point is confined to ``cournot_oracle``,
the independent best-response iteration used to cross-check them.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, NamedTuple, Sequence, Tuple

import numpy as np

from .combinatorics import (
    Coalition,
    EmbeddedCoalition,
    Partition,
    all_coalitions,
    enumerate_partitions,
    grand_coalition,
    least_member,
)
from .errors import InputError, InteriorViolation, OracleError
from .logger import logger
from .metrics import metrics
from .utils import format_rational, parse_rational
from .worth import CharacteristicFunctionGame, PartitionFunctionGame

MAX_FIRMS = 8


@dataclass(frozen=True)
class Market:
    """Linear inverse demand p(Q) = a - bQ with strictly increasing firm costs."""
    a: Fraction
    b: Fraction
    costs: Tuple[Fraction, ...]

    def __post_init__(self):
        if not 1 <= len(self.costs) <= MAX_FIRMS:
            raise InputError(f'market needs 1..{MAX_FIRMS} firms, got {len(self.costs)}')
        if self.b <= 0:
            raise InputError(f'demand slope b must be positive, got {format_rational(self.b)}')
        if any(low >= high for low, high in zip(self.costs, self.costs[1:])):
            raise InputError('firm costs must be strictly increasing')
        if self.a <= self.costs[-1]:
            raise InputError(
                f'demand intercept a = {format_rational(self.a)} must exceed the highest cost '
                f'{format_rational(self.costs[-1])}'
            )

    @classmethod
    def create(cls, a, b, costs: Sequence) -> 'Market':
        """Build from rationals or rational text."""
        return cls(parse_rational(a), parse_rational(b), tuple(parse_rational(c) for c in costs))

    @property
    def n(self) -> int:
        return len(self.costs)

    def cartel_cost(self, coalition: Coalition) -> Fraction:
        """c_S: the cheapest member's cost."""
        return self.costs[least_member(coalition)]

    @property
    def monopoly_profit(self) -> Fraction:
        """(a - c_1)^2 / 4b."""
        return (self.a - self.costs[0]) ** 2 / (4 * self.b)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'a': format_rational(self.a),
            'b': format_rational(self.b),
            'costs': [format_rational(c) for c in self.costs],
        }


class InteriorReport(NamedTuple):
    ok: bool
    violating: List[EmbeddedCoalition]


def interior_check(market: Market) -> InteriorReport:
    """(a + sum of other cartels' costs) / |pi| > c_S for every embedded cartel."""
    violating = []
    for partition in enumerate_partitions(market.n):
        costs = {block: market.cartel_cost(block) for block in partition}
        total = sum(costs.values())
        for block in partition:
            if (market.a + total - costs[block]) / len(partition) <= costs[block]:
                violating.append(EmbeddedCoalition(block, partition))
    return InteriorReport(not violating, violating)


def _require_interior(market: Market) -> None:
    report = interior_check(market)
    if not report.ok:
        raise InteriorViolation(report.violating)


def _cournot_margin(market: Market, coalition: Coalition, partition: Partition) -> Fraction:
    """a + sum of other cartels' costs - |pi| c_S."""
    others = sum((market.cartel_cost(block) for block in partition.others(coalition)), Fraction(0))
    return market.a + others - len(partition) * market.cartel_cost(coalition)


def cournot_worth(market: Market) -> PartitionFunctionGame:
    """
    v(S, pi) = (a + sum_{T != S} c_T - |pi| c_S)^2 / ((|pi| + 1)^2 b).

    Raises:
        InteriorViolation: some embedded cartel would not produce.
    """
    _require_interior(market)
    return PartitionFunctionGame.from_function(
        market.n,
        lambda coalition, partition: (
            _cournot_margin(market, coalition, partition) ** 2 / ((len(partition) + 1) ** 2 * market.b)
        ),
    )


@dataclass
class CartelOutcome:
    """Cournot equilibrium among the cartels of ``partition`` (blocks in canonical order)."""
    partition: Partition
    quantities: Tuple
    total: Any
    price: Any
    profits: Tuple
    iterations: int = 0


def cournot_outcome(market: Market, partition: Partition) -> CartelOutcome:
    """Exact equilibrium: q_S = (a + sum_{T != S} c_T - |pi| c_S) / ((|pi| + 1) b)."""
    if partition.n != market.n:
        raise InputError(f'partition {partition} is over {partition.n} firms, market has {market.n}')
    k = len(partition)
    quantities = tuple(_cournot_margin(market, block, partition) / ((k + 1) * market.b) for block in partition)
    total = sum(quantities, Fraction(0))
    price = market.a - market.b * total
    profits = tuple((price - market.cartel_cost(block)) * q for block, q in zip(partition, quantities))
    return CartelOutcome(partition, quantities, total, price, profits)


def cournot_oracle(market: Market, partition: Partition, tol: float = 1e-9,
                   max_iter: int = 10000) -> CartelOutcome:
    """
    Floating-point best-response iteration from q = 0.

    Every cartel moves simultaneously towards its best reply
    max(0, (a - c_S - b * sum_{T != S} q_T) / 2b) with step 2/(|pi| + 1), which makes
    the map a contraction with rate |pi|/(|pi| + 1). Iteration stops once the
    contraction bound puts the iterate within tol of the fixed point; the result
    must then agree with the closed-form market quantity and price.

    Raises:
        OracleError: no convergence within ``max_iter`` or closed-form mismatch.
    """
    if partition.n != market.n:
        raise InputError(f'partition {partition} is over {partition.n} firms, market has {market.n}')
    a, b = float(market.a), float(market.b)
    costs = np.array([float(market.cartel_cost(block)) for block in partition])
    k = len(partition)
    step = 2.0 / (k + 1)
    rate = k / (k + 1)

    q = np.zeros(k)
    for iteration in range(1, max_iter + 1):
        rivals = q.sum() - q
        reply = np.maximum(0.0, (a - costs - b * rivals) / (2 * b))
        updated = (1 - step) * q + step * reply
        change = float(np.linalg.norm(updated - q))
        q = updated
        scale = max(1.0, float(np.abs(q).max()))
        if change * rate / (1 - rate) < tol * scale * 1e-3:
            break
    else:
        metrics.record_oracle(max_iter)
        raise OracleError(f'best-response iteration did not converge on {partition} within {max_iter} steps')
    metrics.record_oracle(iteration)

    total = float(q.sum())
    price = a - b * total
    expected_total = (k * a - float(costs.sum())) / ((k + 1) * b)
    expected_price = (a + float(costs.sum())) / (k + 1)
    for name, value, expected in (('quantity', total, expected_total), ('price', price, expected_price)):
        if abs(value - expected) > tol * max(1.0, abs(expected)):
            raise OracleError(f'oracle market {name} {value} disagrees with closed form {expected} on {partition}')
    logger.debug(f'oracle {partition}: {iteration} iterations, Q={total:.12g}, p={price:.12g}')
    profits = tuple(float(x) for x in (price - costs) * q)
    return CartelOutcome(partition, tuple(float(x) for x in q), total, price, profits, iteration)


def bertrand_characteristic(market: Market) -> CharacteristicFunctionGame:
    """
    Cartels undercutting at the cheapest outsider's cost.

    v(N) is the monopoly profit. A proper cartel containing the cheapest firm
    sells at the lowest outside cost c' and earns (c' - c_1)(a - c') / b; every
    other cartel earns 0 (a firm priced at its own cost does not produce).
    """
    _require_interior(market)
    grand = grand_coalition(market.n)
    values = {}
    for coalition in all_coalitions(market.n):
        if coalition == grand:
            values[coalition] = market.monopoly_profit
        elif coalition & 1:
            outside = market.cartel_cost(grand & ~coalition)
            values[coalition] = (outside - market.costs[0]) * (market.a - outside) / market.b
        else:
            values[coalition] = Fraction(0)
    return CharacteristicFunctionGame(market.n, values)


def bertrand_worth(market: Market) -> PartitionFunctionGame:
    """The Bertrand worth, constant across partitions."""
    return bertrand_characteristic(market).lift()


def maximin_worth(market: Market) -> CharacteristicFunctionGame:
    """What a cartel can guarantee itself: the monopoly profit for N, 0 otherwise."""
    grand = grand_coalition(market.n)
    return CharacteristicFunctionGame(market.n, {
        coalition: market.monopoly_profit if coalition == grand else Fraction(0)
        for coalition in all_coalitions(market.n)
    })
