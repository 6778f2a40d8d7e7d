"""
Player sets, coalitions and partitions.

Players are 0-indexed. A coalition is an ``int`` bitmask over players 0..n-1;
a partition is a canonical tuple of such masks ordered by least member.
"""

import json
from functools import lru_cache
from dataclasses import dataclass
from typing import Iterable, Iterator, List, NamedTuple, Optional, Sequence, Tuple, Union

from .errors import InputError

Coalition = int
"""Bitmask over players; bit i set means player i is a member."""

MAX_PLAYERS = 12


def grand_coalition(n: int) -> Coalition:
    """Mask with all n players."""
    return (1 << n) - 1


@lru_cache(maxsize=None)
def members(coalition: Coalition) -> Tuple[int, ...]:
    """Players of a coalition in ascending order."""
    result = []
    player = 0
    while coalition > 0:
        if coalition & 1:
            result.append(player)
        coalition >>= 1
        player += 1
    return tuple(result)


def coalition_of(players: Iterable[int]) -> Coalition:
    """Build a coalition mask from player indices."""
    mask = 0
    for player in players:
        mask |= 1 << player
    return mask


def size(coalition: Coalition) -> int:
    """Number of members."""
    return bin(coalition).count('1')


def least_member(coalition: Coalition) -> int:
    """Smallest player index in a nonempty coalition."""
    return (coalition & -coalition).bit_length() - 1


def all_coalitions(n: int) -> List[Coalition]:
    """Every nonempty coalition of n players, ascending by mask."""
    return list(range(1, 1 << n))


def coalitions_containing(n: int, player: int) -> List[Coalition]:
    """Every coalition containing ``player``, ascending by mask."""
    return [mask for mask in range(1, 1 << n) if mask >> player & 1]


@dataclass(frozen=True)
class Partition:
    """
    Canonical partition of players 0..n-1.

    ``blocks`` are pairwise disjoint nonempty masks covering the player set,
    ordered ascending by least member. Build through ``from_blocks`` or
    ``parse`` to get validation and canonical order.
    """
    n: int
    blocks: Tuple[Coalition, ...]

    def __post_init__(self):
        if not 1 <= self.n <= MAX_PLAYERS:
            raise InputError(f'player count {self.n} outside 1..{MAX_PLAYERS}')
        seen = 0
        for block in self.blocks:
            if block <= 0:
                raise InputError(f'empty or negative block mask in partition {list(self.blocks)}')
            if block & seen:
                raise InputError(f'overlapping blocks in partition {self.to_lists()}')
            seen |= block
        if seen != grand_coalition(self.n):
            raise InputError(f'partition {self.to_lists()} does not cover players 0..{self.n - 1}')
        if list(self.blocks) != sorted(self.blocks, key=least_member):
            raise InputError(f'partition {self.to_lists()} is not in canonical order')

    @classmethod
    def from_blocks(cls, n: int, blocks: Iterable[Coalition]) -> 'Partition':
        """Canonicalize and validate an iterable of block masks."""
        return cls(n, tuple(sorted(blocks, key=lambda block: least_member(block) if block > 0 else -1)))

    @classmethod
    def parse(cls, raw: Union[str, Sequence[Sequence[int]]], n: Optional[int] = None) -> 'Partition':
        """
        Parse the text form ``"[[0],[1,2]]"`` or the equivalent nested list.

        ``n`` defaults to the number of players mentioned.
        """
        if isinstance(raw, str):
            try:
                raw = json.loads(raw)
            except ValueError as e:
                raise InputError(f'malformed partition text: {raw!r}') from e
        if not isinstance(raw, list) or not all(isinstance(block, list) for block in raw):
            raise InputError(f'partition must be a list of lists, got {raw!r}')
        players = [player for block in raw for player in block]
        if not all(isinstance(player, int) and not isinstance(player, bool) and player >= 0
                   for player in players):
            raise InputError(f'partition players must be non-negative integers: {raw!r}')
        if len(players) != len(set(players)):
            raise InputError(f'player repeated in partition {raw!r}')
        if n is None:
            n = len(players)
        if any(player >= n for player in players):
            raise InputError(f'partition {raw!r} names players outside 0..{n - 1}')
        return cls.from_blocks(n, (coalition_of(block) for block in raw))

    @classmethod
    def finest(cls, n: int) -> 'Partition':
        """All singletons, [N]."""
        return cls(n, tuple(1 << i for i in range(n)))

    @classmethod
    def grand(cls, n: int) -> 'Partition':
        """The grand coalition alone, {N}."""
        return cls(n, (grand_coalition(n),))

    def __iter__(self) -> Iterator[Coalition]:
        return iter(self.blocks)

    def __len__(self) -> int:
        return len(self.blocks)

    def __contains__(self, coalition: Coalition) -> bool:
        return coalition in self.blocks

    def __str__(self) -> str:
        return json.dumps(self.to_lists(), separators=(',', ':'))

    def to_lists(self) -> List[List[int]]:
        """Nested list of player indices, the JSON form."""
        return [list(members(block)) for block in self.blocks]

    def block_of(self, player: int) -> Coalition:
        """The block containing ``player``."""
        for block in self.blocks:
            if block >> player & 1:
                return block
        raise InputError(f'player {player} not in partition {self}')

    def merge(self, first: Coalition, second: Coalition) -> 'Partition':
        """Replace two blocks by their union."""
        if first not in self.blocks or second not in self.blocks or first == second:
            raise InputError(f'cannot merge {first:#b} and {second:#b} in {self}')
        rest = [block for block in self.blocks if block not in (first, second)]
        return Partition.from_blocks(self.n, rest + [first | second])

    def others(self, coalition: Coalition) -> Tuple[Coalition, ...]:
        """Blocks other than ``coalition``."""
        return tuple(block for block in self.blocks if block != coalition)


class EmbeddedCoalition(NamedTuple):
    """A coalition together with the partition it is a block of."""
    coalition: Coalition
    partition: Partition

    def __str__(self) -> str:
        return f'({list(members(self.coalition))}, {self.partition})'


def embedded(coalition: Coalition, partition: Partition) -> EmbeddedCoalition:
    """Validated constructor for an embedded coalition."""
    if coalition not in partition:
        raise InputError(f'coalition {list(members(coalition))} is not a block of {partition}')
    return EmbeddedCoalition(coalition, partition)


def singletons_and(coalition: Coalition, n: int) -> Partition:
    """{S} together with singletons of N minus S (the gamma-core partition)."""
    rest = grand_coalition(n) & ~coalition
    return Partition.from_blocks(n, [coalition] + [1 << i for i in members(rest)])


def complement_split(coalition: Coalition, n: int) -> Partition:
    """{S, N minus S}, or {N} when S is N (the delta-core partition)."""
    rest = grand_coalition(n) & ~coalition
    if not rest:
        return Partition.grand(n)
    return Partition.from_blocks(n, [coalition, rest])


def _restricted_growth_strings(n: int) -> Iterator[List[int]]:
    """Restricted growth strings of length n in lexicographic order."""
    word = [0] * n

    def extend(position: int, highest: int) -> Iterator[List[int]]:
        if position == n:
            yield word
            return
        for label in range(highest + 2):
            word[position] = label
            yield from extend(position + 1, max(highest, label))

    yield from extend(1, 0)


def enumerate_partitions(n: int) -> List[Partition]:
    """
    All partitions of players 0..n-1, restricted-growth-string lexicographic.

    The first is {N} (string 00..0) and the last is [N] (string 01..n-1).
    """
    if not isinstance(n, int) or not 1 <= n <= MAX_PLAYERS:
        raise InputError(f'player count {n!r} outside 1..{MAX_PLAYERS}')
    partitions = []
    for word in _restricted_growth_strings(n):
        blocks = [0] * (max(word) + 1)
        for player, label in enumerate(word):
            blocks[label] |= 1 << player
        # blocks are already ordered by least member for a restricted growth string
        partitions.append(Partition(n, tuple(blocks)))
    return partitions


def bell_number(n: int) -> int:
    """Bell number via the Bell triangle."""
    row = [1]
    for _ in range(n - 1):
        next_row = [row[-1]]
        for value in row:
            next_row.append(next_row[-1] + value)
        row = next_row
    return row[-1]


def is_refinement(fine: Partition, coarse: Partition) -> Tuple[bool, bool]:
    """
    Whether ``fine`` refines ``coarse``.

    Returns:
        (refines, strict): refines is true iff every block of ``coarse`` is a
        union of blocks of ``fine``; strict additionally requires fine != coarse.
    """
    if fine.n != coarse.n:
        raise InputError(f'partitions over different player sets: {fine.n} vs {coarse.n}')
    refines = all(any(block & ~outer == 0 for outer in coarse.blocks) for block in fine.blocks)
    return refines, refines and fine != coarse
