"""
Cooperative solution concepts: Shapley value, core variants and convexity.

Core variants differ in the partition a deviating coalition S expects:
plain uses the characteristic value v(S); gamma uses {S} with the outsiders
as singletons; delta uses {S, N minus S}.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, combinations_with_replacement, permutations
from math import factorial
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .combinatorics import (
    Coalition,
    Partition,
    all_coalitions,
    complement_split,
    grand_coalition,
    singletons_and,
    size,
)
from .errors import InputError
from .logger import logger
from .numerics import EQ, GEQ, Feasibility, LinearSystem, lp_feasible
from .oligopoly import Market
from .utils import format_coalition, format_rational, format_vector
from .worth import AnyWorth, CharacteristicFunctionGame, PartitionFunctionGame

PLAIN = 'plain'
GAMMA = 'gamma'
DELTA = 'delta'
CORE_VARIANTS = (PLAIN, GAMMA, DELTA)


@dataclass(frozen=True)
class Imputation:
    """Payoff vector y with one entry per player."""
    values: Tuple[Fraction, ...]

    @property
    def total(self) -> Fraction:
        return sum(self.values, Fraction(0))

    def __getitem__(self, player: int) -> Fraction:
        return self.values[player]

    def __len__(self) -> int:
        return len(self.values)

    def to_list(self) -> List[str]:
        return format_vector(self.values)


def _characteristic(game: AnyWorth) -> CharacteristicFunctionGame:
    if isinstance(game, CharacteristicFunctionGame):
        return game
    return game.to_characteristic()


def shapley(game: AnyWorth) -> Imputation:
    """
    phi_i = sum over S not containing i of |S|! (n - |S| - 1)! / n! (v(S u {i}) - v(S)).

    Partition function games must be partition independent.
    """
    game = _characteristic(game)
    n = game.n
    weights = [Fraction(factorial(s) * factorial(n - s - 1), factorial(n)) for s in range(n)]
    grand = grand_coalition(n)
    values = []
    for player in range(n):
        bit = 1 << player
        rest = grand & ~bit
        phi = weights[0] * game.value(bit)
        subset = rest
        # walk every nonempty subset of the other players
        while subset:
            phi += weights[size(subset)] * (game.value(subset | bit) - game.value(subset))
            subset = (subset - 1) & rest
        values.append(phi)
    return Imputation(tuple(values))


def shapley_by_orderings(game: AnyWorth) -> Imputation:
    """Average marginal contribution over every arrival order."""
    game = _characteristic(game)
    n = game.n
    totals = [Fraction(0)] * n
    count = 0
    for order in permutations(range(n)):
        coalition = 0
        for player in order:
            totals[player] += game.value(coalition | 1 << player) - game.value(coalition)
            coalition |= 1 << player
        count += 1
    return Imputation(tuple(total / count for total in totals))


def _deviation_partition(coalition: Coalition, n: int, variant: str) -> Optional[Partition]:
    if variant == GAMMA:
        return singletons_and(coalition, n)
    if variant == DELTA:
        return complement_split(coalition, n)
    return None


def _deviation_value(game: AnyWorth, coalition: Coalition, variant: str) -> Fraction:
    if variant not in CORE_VARIANTS:
        raise InputError(f'unknown core variant "{variant}", expected one of {", ".join(CORE_VARIANTS)}')
    if variant == PLAIN:
        return _characteristic(game).value(coalition)
    if isinstance(game, CharacteristicFunctionGame):
        return game.value(coalition)
    return game.value(coalition, _deviation_partition(coalition, game.n, variant))


def core_system(game: AnyWorth, variant: str = PLAIN) -> LinearSystem:
    """
    Efficiency row plus one row per proper coalition: sum_{i in S} y_i >= v(S, pi_S).
    """
    n = game.n
    system = LinearSystem(n)
    system.add([1] * n, game.grand_value, EQ, 'efficiency')
    for coalition in all_coalitions(n):
        if coalition == grand_coalition(n):
            continue
        row = [1 if coalition >> i & 1 else 0 for i in range(n)]
        system.add(row, _deviation_value(game, coalition, variant), GEQ, format_coalition(coalition))
    return system


def core_feasible(game: AnyWorth, variant: str = PLAIN) -> Feasibility:
    """Exact core non-emptiness with a witness imputation or a Farkas certificate."""
    result = lp_feasible(core_system(game, variant))
    logger.info(f'{variant} core is {"non-empty" if result.feasible else "empty"}')
    return result


def core_violations(game: AnyWorth, y: Sequence, variant: str = PLAIN) -> List[Tuple[str, Fraction, Fraction]]:
    """Every core row ``y`` fails, as (label, lhs, rhs), by exact substitution."""
    if len(y) != game.n:
        raise InputError(f'imputation has {len(y)} entries, game has {game.n} players')
    y = [Fraction(value) for value in y]
    failures = []
    for row in core_system(game, variant).rows:
        lhs = sum((c * value for c, value in zip(row.coefficients, y)), Fraction(0))
        if (row.sense == EQ and lhs != row.bound) or (row.sense == GEQ and lhs < row.bound):
            failures.append((row.label, lhs, row.bound))
    return failures


@dataclass
class ConvexityReport:
    convex: bool
    witness: Optional[Tuple[Coalition, Coalition, Fraction, Fraction]] = None

    def to_dict(self) -> Dict[str, Any]:
        result: Dict[str, Any] = {'convex': self.convex}
        if self.witness:
            first, second, lhs, rhs = self.witness
            result['witness'] = {
                'first': format_coalition(first),
                'second': format_coalition(second),
                'lhs': format_rational(lhs),
                'rhs': format_rational(rhs),
            }
        return result


def check_convexity(game: AnyWorth) -> ConvexityReport:
    """v(S) + v(T) <= v(S u T) + v(S n T) for every pair of coalitions; v(empty) = 0."""
    game = _characteristic(game)
    for first, second in combinations(all_coalitions(game.n), 2):
        lhs = game.value(first) + game.value(second)
        rhs = game.value(first | second) + game.value(first & second)
        if lhs > rhs:
            return ConvexityReport(False, (first, second, lhs, rhs))
    return ConvexityReport(True)


@dataclass
class GammaCharacteristic:
    """
    v^gamma(S) = v(S, {S} with outsiders as singletons).

    For Cournot-derived games ``margins`` holds
    (a + sum_{j outside S} c_j - (|N minus S| + 1) c_S) / (|N minus S| + 2), whose
    square over b is v^gamma(S).
    """
    n: int
    values: Dict[Coalition, Fraction]
    margins: Optional[Dict[Coalition, Fraction]] = None
    market: Optional[Market] = None

    def characteristic(self) -> CharacteristicFunctionGame:
        return CharacteristicFunctionGame(self.n, self.values)

    def margin(self, coalition: Coalition) -> Fraction:
        """Margin of a coalition; the empty coalition has margin 0."""
        if self.margins is None:
            raise InputError('margins need market data (a Cournot-derived game)')
        if coalition == 0:
            return Fraction(0)
        return self.margins[coalition]


def _cournot_gamma_margin(market: Market, coalition: Coalition) -> Fraction:
    outside = [market.costs[j] for j in range(market.n) if not coalition >> j & 1]
    count = len(outside)
    return (market.a + sum(outside, Fraction(0)) - (count + 1) * market.cartel_cost(coalition)) / (count + 2)


def gamma_characteristic(game: PartitionFunctionGame, market: Optional[Market] = None) -> GammaCharacteristic:
    """
    Reduce a partition function game to v^gamma.

    With ``market`` the Cournot margins are attached and must square (over b)
    to the game's values.
    """
    n = game.n
    values = {coalition: game.value(coalition, singletons_and(coalition, n)) for coalition in all_coalitions(n)}
    margins = None
    if market is not None:
        if market.n != n:
            raise InputError(f'market has {market.n} firms, game has {n} players')
        margins = {coalition: _cournot_gamma_margin(market, coalition) for coalition in all_coalitions(n)}
        for coalition, margin in margins.items():
            if margin ** 2 / market.b != values[coalition]:
                raise InputError(
                    f'v^gamma({format_coalition(coalition)}) = {format_rational(values[coalition])} '
                    f'does not match the Cournot margin of this market'
                )
    return GammaCharacteristic(n, values, margins, market)


@dataclass
class MarginPair:
    first: Coalition
    second: Coalition
    lhs: Fraction
    rhs: Fraction

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs

    def to_dict(self) -> Dict[str, Any]:
        return {
            'first': format_coalition(self.first),
            'second': format_coalition(self.second),
            'lhs': format_rational(self.lhs),
            'rhs': format_rational(self.rhs),
            'holds': self.holds,
        }


@dataclass
class MarginReport:
    pairs: List[MarginPair] = field(default_factory=list)

    @property
    def failing(self) -> List[MarginPair]:
        return [pair for pair in self.pairs if not pair.holds]

    def pair(self, first: Coalition, second: Coalition) -> MarginPair:
        """Look up a pair regardless of order."""
        for pair in self.pairs:
            if {pair.first, pair.second} == {first, second}:
                return pair
        raise KeyError((first, second))


def sqrt_supermodularity_report(gc: GammaCharacteristic) -> MarginReport:
    """
    Compare margin(S) + margin(T) with margin(S u T) + margin(S n T) for every pair.

    The square roots of v^gamma share the factor 1/sqrt(b), so the comparison is
    exact on the margins. Reported, not asserted: disjoint pairs can fail.
    """
    if gc.margins is None:
        raise InputError('the margin report needs a Cournot-derived game (market data)')
    report = MarginReport()
    for first, second in combinations_with_replacement(all_coalitions(gc.n), 2):
        report.pairs.append(MarginPair(
            first, second,
            gc.margin(first) + gc.margin(second),
            gc.margin(first | second) + gc.margin(first & second),
        ))
    return report


@dataclass
class DeltaSingletonTest:
    """
    Sufficient test for an empty delta core: singletons alone oversubscribe v(N).

    ``printed_lhs`` is the closed-form expansion
    (a + c_2 - c_1)^2 / 9b + sum_{i >= 2} (a + c_1 - c_i)^2 / 9b. It is only
    logged at DEBUG; ``lhs`` uses the game's own values and is what gets reported.
    """
    lhs: Fraction
    rhs: Fraction
    printed_lhs: Optional[Fraction] = None

    @property
    def empty_certified(self) -> bool:
        return self.lhs > self.rhs

    def to_dict(self) -> Dict[str, Any]:
        return {
            'empty_certified': self.empty_certified,
            'lhs': format_rational(self.lhs),
            'rhs': format_rational(self.rhs),
        }


def delta_singleton_sum_test(game: PartitionFunctionGame, market: Optional[Market] = None) -> DeltaSingletonTest:
    """Sum of v({i}, {{i}, N minus {i}}) against v(N, {N})."""
    n = game.n
    lhs = sum((game.value(1 << i, complement_split(1 << i, n)) for i in range(n)), Fraction(0))
    printed = None
    if market is not None and market.n >= 2:
        a, b, c = market.a, market.b, market.costs
        printed = (a + c[1] - c[0]) ** 2 / (9 * b) + sum(
            ((a + c[0] - ci) ** 2 / (9 * b) for ci in c[1:]), Fraction(0)
        )
        logger.debug(f'closed-form singleton expansion {format_rational(printed)} '
                     f'against v(N) {format_rational(game.grand_value)}, own values give {format_rational(lhs)}')
    return DeltaSingletonTest(lhs, game.grand_value, printed)
