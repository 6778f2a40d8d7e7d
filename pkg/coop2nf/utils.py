"""Utility functions for parsing and formatting text forms."""

import re
from fractions import Fraction
from typing import Iterable, List, Tuple, Union

from .combinatorics import coalition_of, members
from .errors import InputError

RationalLike = Union[int, str, Fraction]

_RATIONAL_RE = re.compile(r'^[+-]?\d+(/\d+)?$')
_DECIMAL_RE = re.compile(r'^[+-]?(\d+\.\d*|\.\d+)$')
_LABEL_RE = re.compile(r'^\s*(\d+)\s*:\s*\{\s*([\d\s,]*)\}\s*$')


def parse_rational(raw: RationalLike) -> Fraction:
    """
    Parse a rational from ``"p/q"``, ``"k"`` or a finite decimal ``"d.dd"``.

    Integers and Fractions pass through. Floats are refused so binary rounding
    never leaks into exact computations.
    """
    if isinstance(raw, bool):
        raise InputError(f'not a rational: {raw!r}')
    if isinstance(raw, (int, Fraction)):
        return Fraction(raw)
    if not isinstance(raw, str):
        raise InputError(f'not a rational: {raw!r} (floats are not accepted, quote the value)')

    text = raw.strip()
    if _RATIONAL_RE.match(text) or _DECIMAL_RE.match(text):
        try:
            return Fraction(text)
        except ZeroDivisionError as e:
            raise InputError(f'zero denominator in rational "{raw}"') from e
    raise InputError(f'not a rational: "{raw}"')


def format_rational(value: Fraction) -> str:
    """Format as ``"k"`` or ``"p/q"`` (always reduced)."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f'{value.numerator}/{value.denominator}'


def parse_costs(raw: str) -> List[Fraction]:
    """
    Parse a comma-separated cost list.

    Example: "10,20,30" or "10, 101/10, 10.2"
    """
    tokens = [token.strip() for token in raw.split(',')]
    if not tokens or any(not token for token in tokens):
        raise InputError(f'malformed cost list: "{raw}"')
    return [parse_rational(token) for token in tokens]


def format_coalition(coalition: int) -> str:
    """Format a coalition 1-indexed, e.g. 0b011 -> ``{1,2}``."""
    return '{' + ','.join(str(i + 1) for i in members(coalition)) + '}'


def format_label(player: int, tag: int) -> str:
    """Format a strategy label 1-indexed, e.g. ``1:{1,2}`` for sigma_1^{1,2}."""
    return f'{player + 1}:{format_coalition(tag)}'


def parse_label(raw: str, n: int) -> Tuple[int, int]:
    """
    Parse a 1-indexed strategy label ``"i:{members}"``.

    Returns:
        (player, tag) with 0-indexed player and tag bitmask.
    """
    match = _LABEL_RE.match(raw)
    if not match:
        raise InputError(f'malformed strategy label: "{raw}"')
    player = int(match.group(1)) - 1
    member_tokens = [token for token in match.group(2).replace(',', ' ').split() if token]
    players = [int(token) - 1 for token in member_tokens]
    if player < 0 or player >= n or any(p < 0 or p >= n for p in players):
        raise InputError(f'strategy label "{raw}" names a player outside 1..{n}')
    tag = coalition_of(players)
    if not tag >> player & 1:
        raise InputError(f'strategy label "{raw}": tag does not contain its player')
    return player, tag


def format_vector(values: Iterable[Fraction]) -> List[str]:
    """Format a payoff or imputation vector as rational strings."""
    return [format_rational(value) for value in values]
