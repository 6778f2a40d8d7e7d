"""
Normal-form game files.

Two layouts share the ``"kind"`` key:

- ``dense-table``: explicit strategies (``"i:{members}"`` labels, 1-indexed,
  or opaque text) and one payoff row per profile, the profile given as
  strategy indices (label text is accepted on input too);
- ``gamma-construction``: a worth game plus theta, evaluated lazily.
"""

from typing import Any, Dict, Hashable, List, Sequence

from ..construction import GammaGame
from ..errors import InputError
from ..normal_form import DENSE, GAMMA_LAZY, DenseGame, NormalFormGame, StrategyLabel, label_text
from ..utils import format_rational, format_vector, parse_label, parse_rational
from .worth import read_json, worth_from_dict, worth_to_dict, write_json

GAMMA_KIND = 'gamma-construction'


def game_to_dict(game: NormalFormGame, dense: bool = False) -> Dict[str, Any]:
    """
    JSON form of ``game``.

    A ``GammaGame`` is written lazily (worth + theta) unless ``dense`` asks for
    the full payoff table.
    """
    if isinstance(game, GammaGame) and not dense:
        return {
            'kind': GAMMA_KIND,
            'game': worth_to_dict(game.worth),
            'theta': format_rational(game.theta),
        }
    return {
        'kind': DENSE,
        'players': game.n,
        'strategies': [[label_text(label) for label in player_strategies] for player_strategies in game.strategies],
        'payoffs': [
            {'profile': list(profile), 'u': format_vector(game.payoff(profile))}
            for profile in game.profiles()
        ],
    }


def _player_strategies(player: int, labels: Any, n: int) -> List[Hashable]:
    """
    Strategy labels of one player.

    A list whose every entry parses as ``"i:{members}"`` becomes tag labels
    owned by ``player``; any other list is kept as opaque text labels.
    """
    if not isinstance(labels, list) or not labels:
        raise InputError(f'strategies[{player}] must be a nonempty list of labels')
    parsed = []
    for raw in labels:
        try:
            parsed.append(parse_label(str(raw), n))
        except InputError:
            return [str(raw) for raw in labels]
    for raw, (owner, _) in zip(labels, parsed):
        if owner != player:
            raise InputError(f'strategies[{player}]: label "{raw}" belongs to player {owner + 1}')
    return [StrategyLabel(owner, tag) for owner, tag in parsed]


def _profile_index(where: str, player: int, raw: Any, strategies: Sequence[Hashable],
                   lookup: Dict[str, int]) -> int:
    """Resolve a profile entry: a strategy index or, alternatively, its label text."""
    if isinstance(raw, int) and not isinstance(raw, bool):
        if not 0 <= raw < len(strategies):
            raise InputError(f'{where}: index {raw} is out of range for player {player + 1} '
                             f'({len(strategies)} strategies)')
        return raw
    if isinstance(raw, str) and raw in lookup:
        return lookup[raw]
    raise InputError(f'{where}: {raw!r} is not a strategy of player {player + 1}')


def _dense_from_dict(data: Dict[str, Any]) -> DenseGame:
    n = data.get('players')
    raw_strategies = data.get('strategies')
    if not isinstance(raw_strategies, list) or not raw_strategies:
        raise InputError('"strategies" must be a nonempty list, one entry per player')
    if n is None:
        n = len(raw_strategies)
    if n != len(raw_strategies):
        raise InputError(f'"players" is {n} but "strategies" lists {len(raw_strategies)} players')

    strategies = [_player_strategies(player, labels, n) for player, labels in enumerate(raw_strategies)]

    rows = data.get('payoffs')
    if not isinstance(rows, list):
        raise InputError('"payoffs" must be a list of {"profile", "u"} rows')
    lookup = [{label_text(label): index for index, label in enumerate(s)} for s in strategies]
    payoffs = {}
    for position, row in enumerate(rows):
        where = f'payoffs[{position}]'
        if not isinstance(row, dict) or not isinstance(row.get('profile'), list) or not isinstance(row.get('u'), list):
            raise InputError(f'{where}: expected {{"profile": [...], "u": [...]}}')
        if len(row['profile']) != n:
            raise InputError(f'{where}: profile has {len(row["profile"])} entries, expected {n}')
        profile = tuple(
            _profile_index(where, player, raw, strategies[player], lookup[player])
            for player, raw in enumerate(row['profile'])
        )
        if profile in payoffs:
            raise InputError(f'{where}: duplicate row for profile {row["profile"]}')
        try:
            payoffs[profile] = [parse_rational(u) for u in row['u']]
        except InputError as e:
            raise InputError(f'{where}: {e}') from e
    return DenseGame(strategies, payoffs)


def game_from_dict(data: Any) -> NormalFormGame:
    """Parse either layout; raises InputError on malformed documents."""
    if not isinstance(data, dict):
        raise InputError('game file must hold a JSON object')
    kind = data.get('kind', DENSE)
    if kind == GAMMA_KIND or kind == GAMMA_LAZY:
        if 'game' not in data or 'theta' not in data:
            raise InputError(f'a {GAMMA_KIND} file needs "game" and "theta"')
        worth = worth_from_dict(data['game']).partition_game
        return GammaGame(worth, parse_rational(data['theta']))
    if kind == DENSE:
        return _dense_from_dict(data)
    raise InputError(f'unknown game kind "{kind}", expected "{DENSE}" or "{GAMMA_KIND}"')


def load_game(path: str) -> NormalFormGame:
    """Read a game file."""
    try:
        return game_from_dict(read_json(path))
    except InputError as e:
        if str(e).startswith(path):
            raise
        raise InputError(f'{path}: {e}') from e


def save_game(path: str, game: NormalFormGame, dense: bool = False) -> None:
    """Write a game file."""
    write_json(path, game_to_dict(game, dense))
