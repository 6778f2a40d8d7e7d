"""
Partition function form and characteristic function form games.

A ``PartitionFunctionGame`` holds v(S, pi) for every embedded coalition of
every partition of players 0..n-1; completeness is enforced at construction.
A ``CharacteristicFunctionGame`` holds v(S) for every nonempty coalition and
lifts to a partition-independent ``PartitionFunctionGame``.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Dict, Iterator, List, Mapping, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from .combinatorics import (
    Coalition,
    EmbeddedCoalition,
    Partition,
    all_coalitions,
    enumerate_partitions,
    grand_coalition,
    members,
)
from .errors import InputError, InvariantViolation
from .logger import logger, log_subsection

MAX_WORTH_PLAYERS = 8

STRICT = 'strict'
WEAK_ONLY = 'weak-only'
NONE = 'none'

STRICT_PFG = 'strict-pfg'
WEAK_CF = 'weak-cf'
WEAK_PFG = 'weak-pfg'
RANDOM_KINDS = (STRICT_PFG, WEAK_CF, WEAK_PFG)


def _check_players(n: int) -> None:
    if not isinstance(n, int) or not 1 <= n <= MAX_WORTH_PLAYERS:
        raise InputError(f'player count {n!r} outside 1..{MAX_WORTH_PLAYERS}')


class PartitionFunctionGame:
    """Worth v(S, pi) on every embedded coalition; immutable after construction."""

    def __init__(self, n: int, values: Mapping[Tuple[Coalition, Partition], Fraction]):
        _check_players(n)
        self.n = n
        self._values: Dict[EmbeddedCoalition, Fraction] = {}
        for (coalition, partition), value in values.items():
            if partition.n != n:
                raise InputError(f'partition {partition} is over {partition.n} players, game has {n}')
            if coalition not in partition:
                raise InputError(f'coalition {list(members(coalition))} is not a block of {partition}')
            self._values[EmbeddedCoalition(coalition, partition)] = Fraction(value)
        self._check_complete()

    def _check_complete(self) -> None:
        for partition in enumerate_partitions(self.n):
            for block in partition:
                if (block, partition) not in self._values:
                    raise InputError(
                        f'worth map is incomplete: missing v({list(members(block))}, {partition})'
                    )
        expected = sum(len(partition) for partition in enumerate_partitions(self.n))
        if len(self._values) != expected:
            raise InputError(f'worth map has {len(self._values)} entries, expected {expected}')

    @classmethod
    def from_function(cls, n: int, worth: Callable[[Coalition, Partition], Fraction]) -> 'PartitionFunctionGame':
        """Tabulate ``worth`` on every embedded coalition."""
        _check_players(n)
        return cls(n, {
            (block, partition): worth(block, partition)
            for partition in enumerate_partitions(n)
            for block in partition
        })

    def value(self, coalition: Coalition, partition: Partition) -> Fraction:
        """v(S, pi); the empty coalition is worth 0."""
        if coalition == 0:
            return Fraction(0)
        try:
            return self._values[(coalition, partition)]
        except KeyError:
            raise InputError(
                f'no value for v({list(members(coalition))}, {partition})'
            ) from None

    @property
    def grand_value(self) -> Fraction:
        """v(N, {N})."""
        return self.value(grand_coalition(self.n), Partition.grand(self.n))

    def embedded_coalitions(self) -> Iterator[Tuple[EmbeddedCoalition, Fraction]]:
        """Every (embedded coalition, value) in canonical partition order."""
        for partition in enumerate_partitions(self.n):
            for block in partition:
                yield EmbeddedCoalition(block, partition), self._values[(block, partition)]

    def is_partition_independent(self) -> bool:
        """Whether v(S, pi) = v(S, pi') for every pi, pi' containing S."""
        seen: Dict[Coalition, Fraction] = {}
        for (coalition, _), value in self.embedded_coalitions():
            if seen.setdefault(coalition, value) != value:
                return False
        return True

    def to_characteristic(self) -> 'CharacteristicFunctionGame':
        """Characteristic view of a partition-independent game."""
        if not self.is_partition_independent():
            raise InputError('game is partition dependent; reduce it first (e.g. gamma characteristic)')
        return CharacteristicFunctionGame(self.n, {
            coalition: value for (coalition, _), value in self.embedded_coalitions()
        })

    def __eq__(self, other) -> bool:
        return isinstance(other, PartitionFunctionGame) and self.n == other.n and self._values == other._values

    def __repr__(self) -> str:
        return f'PartitionFunctionGame(n={self.n}, entries={len(self._values)})'


class CharacteristicFunctionGame:
    """Worth v(S) on every nonempty coalition; v(empty) = 0."""

    def __init__(self, n: int, values: Mapping[Coalition, Fraction]):
        _check_players(n)
        self.n = n
        self._values: Dict[Coalition, Fraction] = {}
        for coalition, value in values.items():
            if coalition == 0:
                if Fraction(value) != 0:
                    raise InputError('the empty coalition must be worth 0')
                continue
            if coalition < 0 or coalition > grand_coalition(n):
                raise InputError(f'coalition mask {coalition} outside the player set')
            self._values[coalition] = Fraction(value)
        for coalition in all_coalitions(n):
            if coalition not in self._values:
                raise InputError(f'characteristic map is incomplete: missing v({list(members(coalition))})')

    def value(self, coalition: Coalition) -> Fraction:
        """v(S); v(empty) = 0."""
        if coalition == 0:
            return Fraction(0)
        return self._values[coalition]

    @property
    def grand_value(self) -> Fraction:
        """v(N)."""
        return self._values[grand_coalition(self.n)]

    def items(self) -> Iterator[Tuple[Coalition, Fraction]]:
        """Every (coalition, value), ascending by mask."""
        for coalition in all_coalitions(self.n):
            yield coalition, self._values[coalition]

    def lift(self) -> PartitionFunctionGame:
        """The partition-independent partition function with the same values."""
        return PartitionFunctionGame.from_function(self.n, lambda coalition, _: self._values[coalition])

    def superadditivity(self) -> 'SuperadditivityReport':
        """Classify directly over every unordered pair of disjoint nonempty coalitions."""
        report = SuperadditivityReport()
        for first, second in combinations(all_coalitions(self.n), 2):
            if first & second:
                continue
            report.record(first, second, None, self.value(first) + self.value(second),
                          self.value(first | second))
        return report.finish()

    def __eq__(self, other) -> bool:
        return isinstance(other, CharacteristicFunctionGame) and self.n == other.n and self._values == other._values

    def __repr__(self) -> str:
        return f'CharacteristicFunctionGame(n={self.n})'


AnyWorth = Union[PartitionFunctionGame, CharacteristicFunctionGame]


def as_partition_game(game: AnyWorth) -> PartitionFunctionGame:
    """Lift characteristic games; pass partition function games through."""
    if isinstance(game, CharacteristicFunctionGame):
        return game.lift()
    return game


class SuperadditivityWitness(NamedTuple):
    """Pair (S, T) of blocks of ``partition`` (None for characteristic checks)."""
    first: Coalition
    second: Coalition
    partition: Optional[Partition]
    separate: Fraction
    merged: Fraction


@dataclass
class SuperadditivityReport:
    """Classification with the witnesses that determined it."""
    classification: str = STRICT
    violations: List[SuperadditivityWitness] = field(default_factory=list)
    equalities: List[SuperadditivityWitness] = field(default_factory=list)

    def record(self, first: Coalition, second: Coalition, partition: Optional[Partition],
               separate: Fraction, merged: Fraction) -> None:
        """File one pair check."""
        if separate > merged:
            self.violations.append(SuperadditivityWitness(first, second, partition, separate, merged))
        elif separate == merged:
            self.equalities.append(SuperadditivityWitness(first, second, partition, separate, merged))

    def finish(self) -> 'SuperadditivityReport':
        """Set ``classification`` from the filed witnesses."""
        if self.violations:
            self.classification = NONE
        elif self.equalities:
            self.classification = WEAK_ONLY
        else:
            self.classification = STRICT
        return self


def classify_superadditivity(game: AnyWorth) -> SuperadditivityReport:
    """
    Check v(S, pi) + v(T, pi) <= v(S u T, merged pi) for every partition and block pair.

    'strict' iff every check is strict, 'weak-only' iff all hold with at least one
    equality, 'none' otherwise. Singleton values are not assumed to be 0.
    """
    game = as_partition_game(game)
    report = SuperadditivityReport()
    for partition in enumerate_partitions(game.n):
        for first, second in combinations(partition.blocks, 2):
            merged = partition.merge(first, second)
            report.record(
                first, second, partition,
                game.value(first, partition) + game.value(second, partition),
                game.value(first | second, merged),
            )
    return report.finish()


class ExternalityWitness(NamedTuple):
    """v(R, pi) before and after S and T merge."""
    affected: Coalition
    first: Coalition
    second: Coalition
    partition: Partition
    before: Fraction
    after: Fraction


@dataclass
class ExternalityReport:
    """Strict changes in an outsider's worth when two other blocks merge."""
    positive: List[ExternalityWitness] = field(default_factory=list)
    negative: List[ExternalityWitness] = field(default_factory=list)


def externality_report(game: AnyWorth) -> ExternalityReport:
    """Enumerate disjoint blocks (R, S, T) of a common partition and compare v(R, .)."""
    game = as_partition_game(game)
    report = ExternalityReport()
    for partition in enumerate_partitions(game.n):
        if len(partition) < 3:
            continue
        for affected in partition:
            before = game.value(affected, partition)
            for first, second in combinations(partition.others(affected), 2):
                after = game.value(affected, partition.merge(first, second))
                witness = ExternalityWitness(affected, first, second, partition, before, after)
                if before < after:
                    report.positive.append(witness)
                elif before > after:
                    report.negative.append(witness)
    return report


def example_one_game(a) -> PartitionFunctionGame:
    """Two-player zero-normalized game: v({0}) = v({1}) = 0, v(N) = a."""
    a = Fraction(a)
    return PartitionFunctionGame.from_function(
        2, lambda coalition, _: a if coalition == 0b11 else Fraction(0)
    )


def example_two_game(a, b, c, d, e, f, g) -> PartitionFunctionGame:
    """
    Three-player zero-normalized game parameterized by (a, ..., g).

    v({0,1}|{2}) = a and v({2}|{0,1}) = b; v({0,2}|{1}) = c and v({1}|{0,2}) = d;
    v({1,2}|{0}) = e and v({0}|{1,2}) = f; v(N) = g; singletons of [N] are 0.
    """
    a, b, c, d, e, f, g = (Fraction(x) for x in (a, b, c, d, e, f, g))
    pairs = {
        0b011: (a, b),
        0b101: (c, d),
        0b110: (e, f),
    }

    def worth(coalition: Coalition, partition: Partition) -> Fraction:
        if len(partition) == 1:
            return g
        if len(partition) == 3:
            return Fraction(0)
        pair = next(block for block in partition if block != (block & -block))
        merged_value, outsider_value = pairs[pair]
        return merged_value if coalition == pair else outsider_value

    return PartitionFunctionGame.from_function(3, worth)


Perturbation = Callable[[Coalition, Tuple[Coalition, ...]], Fraction]


def squared_weight_game(
        weights: Sequence[int],
        additive: Optional[Mapping[int, Fraction]] = None,
        perturbation: Optional[Perturbation] = None,
) -> PartitionFunctionGame:
    """
    v(S, pi) = (sum of w_i over S outside D)^2 + sum of d_i over S in D + e.

    ``additive`` maps the players of D to d_i; merging a coalition made only of D
    players is then an exact equality. ``perturbation`` e is called with the
    non-D part of S and the blocks of pi restricted to non-D players, and is
    never applied to coalitions made only of D players.
    """
    n = len(weights)
    additive = dict(additive or {})
    core_players = grand_coalition(n) & ~sum(1 << i for i in additive)

    def worth(coalition: Coalition, partition: Partition) -> Fraction:
        core = coalition & core_players
        value = Fraction(sum(weights[i] for i in members(core))) ** 2
        value += sum((Fraction(additive[i]) for i in members(coalition & ~core_players)), Fraction(0))
        if perturbation is not None and core:
            restricted = tuple(block & core_players for block in partition if block & core_players)
            value += perturbation(core, restricted)
        return value

    return PartitionFunctionGame.from_function(n, worth)


def _bounded_perturbation(rng: np.random.Generator, n: int, core_players: Coalition,
                          bound: Fraction) -> Perturbation:
    """Random table e(core, restricted) with |e| <= bound, drawn in canonical order."""
    table: Dict[Tuple[Coalition, Tuple[Coalition, ...]], Fraction] = {}
    for partition in enumerate_partitions(n):
        restricted = tuple(block & core_players for block in partition if block & core_players)
        for block in partition:
            key = (block & core_players, restricted)
            if key[0] and key not in table:
                table[key] = Fraction(int(rng.integers(-12, 13)), 12) * bound
    return lambda core, restricted: table[(core, restricted)]


def generate_random(n: int, kind: str, seed: int) -> PartitionFunctionGame:
    """
    Seeded random game of the requested superadditivity class.

    strict-pfg: squared positive weights plus per-(S, pi) perturbations of at most
    a sixth of the minimum base slack each (three terms stay under half of it).
    weak-cf: a random nonempty proper additive set D flattens every merge with a
    D-only coalition to exact equality. weak-pfg: weak-cf plus perturbations that
    leave those equalities intact. The result is re-classified before returning.
    """
    if not isinstance(n, int) or not 2 <= n <= 6:
        raise InputError(f'random games need 2..6 players, got {n!r}')
    if kind not in RANDOM_KINDS:
        raise InputError(f'unknown random game class "{kind}", expected one of {", ".join(RANDOM_KINDS)}')

    log_subsection(f'Generating {kind} game: n={n}, seed={seed}')
    rng = np.random.default_rng(seed)
    weights = [int(w) for w in rng.integers(1, 6, size=n)]

    additive: Dict[int, Fraction] = {}
    if kind in (WEAK_CF, WEAK_PFG):
        dummy_mask = int(rng.integers(1, (1 << n) - 1))
        additive = {i: Fraction(int(rng.integers(1, 6))) for i in members(dummy_mask)}
    core_players = grand_coalition(n) & ~sum(1 << i for i in additive)

    perturbation = None
    if kind in (STRICT_PFG, WEAK_PFG):
        core_weights = sorted(weights[i] for i in members(core_players))
        if len(core_weights) >= 2:
            bound = Fraction(2 * core_weights[0] * core_weights[1], 6)
        else:
            bound = Fraction(1)
        perturbation = _bounded_perturbation(rng, n, core_players, bound)

    game = squared_weight_game(weights, additive, perturbation)
    expected = STRICT if kind == STRICT_PFG else WEAK_ONLY
    classification = classify_superadditivity(game).classification
    if classification != expected:
        raise InvariantViolation(f'generated {kind} game classified as {classification}')
    logger.info(f'  weights={weights} additive={sorted(additive)} -> {classification}')
    return game
