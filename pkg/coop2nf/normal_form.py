"""
Strategy-labeled normal-form games and their composite games.

Profiles are tuples of strategy indices, one per player; ``game.strategies[i]``
maps an index back to its label. Games built by the construction label every
strategy with a ``StrategyLabel`` (player, tag), the text form being
``"i:{members}"`` 1-indexed.
"""

from abc import ABC, abstractmethod
from fractions import Fraction
from itertools import product
from typing import Dict, Hashable, Iterator, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from .combinatorics import Coalition, Partition, members
from .errors import AmbiguityError, InputError
from .metrics import metrics
from .utils import format_label

Profile = Tuple[int, ...]
"""One strategy index per player."""

Joint = Tuple[int, ...]
"""Strategy indices of a coalition's members, ascending by player."""

PayoffVector = Tuple[Fraction, ...]

DENSE = 'dense-table'
GAMMA_LAZY = 'gamma-lazy'


class StrategyLabel(NamedTuple):
    """sigma_i^S: player i announcing coalition ``tag`` (i is in ``tag``)."""
    player: int
    tag: Coalition

    def __str__(self) -> str:
        return format_label(self.player, self.tag)


def label_text(label: Hashable) -> str:
    """Text form of a strategy label; opaque labels fall back to ``str``."""
    return str(label)


class NormalFormGame(ABC):
    """
    Finite normal-form game with labeled strategies and exact payoffs.

    Subclasses provide ``_evaluate``; ``payoff`` caches results when the game
    was built with ``cache=True``. The optional dominance registry maps a
    coalition to its dominant joint strategy and drives ``rho``/``kappa``.
    """

    representation = DENSE

    def __init__(self, strategies: Sequence[Sequence[Hashable]], cache: bool = True):
        if not strategies:
            raise InputError('a normal-form game needs at least one player')
        if any(not player_strategies for player_strategies in strategies):
            raise InputError('every player needs at least one strategy')
        self.n = len(strategies)
        self.strategies: Tuple[Tuple[Hashable, ...], ...] = tuple(tuple(s) for s in strategies)
        self._index = [
            {label: index for index, label in enumerate(player_strategies)}
            for player_strategies in self.strategies
        ]
        for player, player_strategies in enumerate(self.strategies):
            if len(self._index[player]) != len(player_strategies):
                raise InputError(f'player {player + 1} has duplicate strategy labels')
        self._cache: Optional[Dict[Profile, PayoffVector]] = {} if cache else None
        self._registry: Optional[Dict[Coalition, Joint]] = None
        self._registry_by_player: Dict[int, List[Tuple[Coalition, Joint]]] = {}

    @abstractmethod
    def _evaluate(self, profile: Profile) -> PayoffVector:
        """Compute the payoff vector at ``profile``."""

    @property
    def num_profiles(self) -> int:
        """Size of the pure profile space."""
        total = 1
        for player_strategies in self.strategies:
            total *= len(player_strategies)
        return total

    def profiles(self) -> Iterator[Profile]:
        """Every pure profile, lexicographic by index."""
        return product(*(range(len(s)) for s in self.strategies))

    def index_of(self, player: int, label: Hashable) -> int:
        """Strategy index of ``label`` for ``player``."""
        try:
            return self._index[player][label]
        except KeyError:
            raise InputError(f'player {player + 1} has no strategy {label_text(label)}') from None

    def label(self, player: int, index: int) -> Hashable:
        """Strategy label behind ``index`` for ``player``."""
        return self.strategies[player][index]

    def profile_labels(self, profile: Profile) -> List[str]:
        """Text labels of a profile, one per player."""
        return [label_text(self.strategies[i][index]) for i, index in enumerate(profile)]

    def payoff(self, profile: Profile) -> PayoffVector:
        """Payoff vector at ``profile``."""
        if self._cache is not None:
            cached = self._cache.get(profile)
            if cached is not None:
                return cached
        value = self._evaluate(profile)
        metrics.record_profile()
        if self._cache is not None:
            self._cache[profile] = value
        return value

    def coalition_payoff(self, coalition: Coalition, profile: Profile) -> Fraction:
        """u_S(x): sum of member payoffs."""
        vector = self.payoff(profile)
        return sum((vector[i] for i in members(coalition)), Fraction(0))

    @property
    def registry(self) -> Optional[Dict[Coalition, Joint]]:
        """Dominant joint strategy per coalition, if known."""
        return self._registry

    def set_registry(self, registry: Mapping[Coalition, Joint]) -> None:
        """Install a dominance registry (coalition -> member strategy indices)."""
        by_player: Dict[int, List[Tuple[Coalition, Joint]]] = {}
        for coalition, joint in sorted(registry.items()):
            if len(joint) != len(members(coalition)):
                raise InputError(f'registry entry for {list(members(coalition))} has the wrong length')
            for player in members(coalition):
                by_player.setdefault(player, []).append((coalition, tuple(joint)))
        self._registry = dict(registry)
        self._registry_by_player = by_player

    def registered_for(self, player: int) -> List[Tuple[Coalition, Joint]]:
        """Registry entries whose coalition contains ``player``."""
        return self._registry_by_player.get(player, [])


class DenseGame(NormalFormGame):
    """Game given by an explicit payoff table over every profile."""

    def __init__(self, strategies: Sequence[Sequence[Hashable]],
                 payoffs: Mapping[Profile, Sequence[Fraction]]):
        super().__init__(strategies, cache=False)
        table: Dict[Profile, PayoffVector] = {}
        for profile, vector in payoffs.items():
            profile = tuple(profile)
            if len(profile) != self.n or any(
                    not 0 <= index < len(self.strategies[i]) for i, index in enumerate(profile)):
                raise InputError(f'payoff row for an invalid profile {list(profile)}')
            if len(vector) != self.n:
                raise InputError(f'payoff row {list(profile)} has {len(vector)} entries, expected {self.n}')
            table[profile] = tuple(Fraction(u) for u in vector)
        if len(table) != self.num_profiles:
            missing = next(p for p in self.profiles() if p not in table)
            raise InputError(
                f'payoff table has {len(table)} rows, expected {self.num_profiles}; '
                f'first missing profile {self.profile_labels(missing)}'
            )
        self._table = table

    def _evaluate(self, profile: Profile) -> PayoffVector:
        try:
            return self._table[profile]
        except KeyError:
            raise InputError(f'no payoff for profile {list(profile)}') from None


def to_dense(game: NormalFormGame) -> DenseGame:
    """Materialize every payoff of ``game`` into a table; the registry carries over."""
    dense = DenseGame(game.strategies, {profile: game.payoff(profile) for profile in game.profiles()})
    if game.registry is not None:
        dense.set_registry(game.registry)
    return dense


def coalition_payoff(game: NormalFormGame, coalition: Coalition, profile: Profile) -> Fraction:
    """u_S(x) = sum over i in S of u_i(x)."""
    if coalition <= 0:
        raise InputError('coalition payoff needs a nonempty coalition')
    return game.coalition_payoff(coalition, profile)


def rho(game: NormalFormGame, profile: Profile, player: int) -> Coalition:
    """
    The coalition whose dominant joint strategy ``player`` is part of in ``profile``.

    Returns 0 (the empty coalition) when no registered joint strategy containing
    ``player`` is fully played.

    Raises:
        InputError: the game has no dominance registry.
        AmbiguityError: two registered coalitions both qualify.
    """
    if game.registry is None:
        raise InputError('rho needs a dominance registry; build one with solvers.build_dominance_registry')
    found = 0
    for coalition, joint in game.registered_for(player):
        if all(profile[j] == index for j, index in zip(members(coalition), joint)):
            if found:
                raise AmbiguityError(found, coalition, player)
            found = coalition
    return found


def kappa(game: NormalFormGame, profile: Profile, coalition: Coalition) -> int:
    """Number of members of ``coalition`` playing a potentially dominant strategy."""
    return sum(1 for player in members(coalition) if rho(game, profile, player))


def rho_partition(game: NormalFormGame, profile: Profile) -> Optional[Partition]:
    """{rho_x(i)} as a partition when every player has one, else None."""
    blocks = {rho(game, profile, player) for player in range(game.n)}
    if 0 in blocks:
        return None
    return Partition.from_blocks(game.n, blocks)


class CompositeGame:
    """
    Gamma_pi: the blocks of ``partition`` act as players with joint strategies.

    Opposing profiles of a block S are tuples of joint strategies, one per
    other block in canonical order.
    """

    def __init__(self, base: NormalFormGame, partition: Partition):
        if partition.n != base.n:
            raise InputError(f'partition {partition} is over {partition.n} players, game has {base.n}')
        self.base = base
        self.partition = partition
        self._members = {block: members(block) for block in partition}
        self._others = {block: partition.others(block) for block in partition}

    @property
    def blocks(self) -> Tuple[Coalition, ...]:
        return self.partition.blocks

    def _check_block(self, coalition: Coalition) -> None:
        if coalition not in self._members:
            raise InputError(f'coalition {list(members(coalition))} is not a block of {self.partition}')

    def joint_strategies(self, coalition: Coalition) -> List[Joint]:
        """X_S in lexicographic index order."""
        self._check_block(coalition)
        return list(product(*(range(len(self.base.strategies[i])) for i in self._members[coalition])))

    def others(self, coalition: Coalition) -> Tuple[Coalition, ...]:
        self._check_block(coalition)
        return self._others[coalition]

    def opposing(self, coalition: Coalition,
                 survivors: Optional[Mapping[Coalition, Sequence[Joint]]] = None) -> List[Tuple[Joint, ...]]:
        """Every opposing profile of ``coalition``, optionally restricted to ``survivors``."""
        choices = [
            survivors[block] if survivors is not None else self.joint_strategies(block)
            for block in self.others(coalition)
        ]
        return list(product(*choices))

    def assemble(self, coalition: Coalition, joint: Joint, opposing: Sequence[Joint]) -> Profile:
        """Full profile from a block's joint strategy and an opposing profile."""
        profile = [0] * self.base.n
        for player, index in zip(self._members[coalition], joint):
            profile[player] = index
        for block, block_joint in zip(self._others[coalition], opposing):
            for player, index in zip(self._members[block], block_joint):
                profile[player] = index
        return tuple(profile)

    def split(self, profile: Profile, coalition: Coalition) -> Joint:
        """The joint strategy ``coalition`` plays in ``profile``."""
        return tuple(profile[player] for player in self._members[coalition])

    def payoff(self, coalition: Coalition, profile: Profile) -> Fraction:
        """u_S at a full profile."""
        return self.base.coalition_payoff(coalition, profile)

    def block_payoffs(self, profile: Profile) -> Tuple[Fraction, ...]:
        """u_S for every block, canonical order."""
        return tuple(self.payoff(block, profile) for block in self.blocks)

    def __repr__(self) -> str:
        return f'CompositeGame(partition={self.partition}, representation={self.base.representation})'
