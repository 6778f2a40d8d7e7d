"""Worth file codec (partition and characteristic function games)."""

import json
from dataclasses import dataclass
from typing import Any, Dict, Optional

from ..combinatorics import Partition, coalition_of, members
from ..errors import InputError
from ..logger import logger
from ..oligopoly import Market
from ..utils import format_rational, parse_rational
from ..worth import AnyWorth, CharacteristicFunctionGame, PartitionFunctionGame, as_partition_game

PARTITION_KIND = 'partition'
CHARACTERISTIC_KIND = 'characteristic'

COURNOT = 'cournot'
BERTRAND = 'bertrand'
MAXIMIN = 'maximin'
MARKET_MODELS = (COURNOT, BERTRAND, MAXIMIN)


@dataclass
class WorthFile:
    """A loaded worth game with the market it was generated from, if recorded."""
    game: AnyWorth
    market: Optional[Market] = None
    model: Optional[str] = None

    @property
    def partition_game(self) -> PartitionFunctionGame:
        return as_partition_game(self.game)


def worth_to_dict(game: AnyWorth, market: Optional[Market] = None, model: Optional[str] = None) -> Dict[str, Any]:
    """JSON form; entries in canonical partition and block order."""
    if isinstance(game, CharacteristicFunctionGame):
        data: Dict[str, Any] = {
            'players': game.n,
            'kind': CHARACTERISTIC_KIND,
            'values': [
                {'coalition': list(members(coalition)), 'value': format_rational(value)}
                for coalition, value in game.items()
            ],
        }
    else:
        data = {
            'players': game.n,
            'kind': PARTITION_KIND,
            'values': [
                {
                    'partition': partition.to_lists(),
                    'coalition': list(members(coalition)),
                    'value': format_rational(value),
                }
                for (coalition, partition), value in game.embedded_coalitions()
            ],
        }
    if market is not None:
        data['market'] = {'model': model or COURNOT, **market.to_dict()}
    return data


def _coalition(raw: Any, n: int, where: str) -> int:
    if not isinstance(raw, list) or not raw or not all(
            isinstance(p, int) and not isinstance(p, bool) and 0 <= p < n for p in raw):
        raise InputError(f'{where}: coalition must be a nonempty list of players in 0..{n - 1}, got {raw!r}')
    if len(set(raw)) != len(raw):
        raise InputError(f'{where}: repeated player in coalition {raw!r}')
    return coalition_of(raw)


def worth_from_dict(data: Any) -> WorthFile:
    """
    Parse the JSON form.

    Raises:
        InputError: malformed document, duplicate or missing entries.
    """
    if not isinstance(data, dict):
        raise InputError('worth file must hold a JSON object')
    n = data.get('players')
    if not isinstance(n, int) or isinstance(n, bool):
        raise InputError(f'"players" must be an integer, got {n!r}')
    kind = data.get('kind', PARTITION_KIND)
    entries = data.get('values')
    if not isinstance(entries, list):
        raise InputError('"values" must be a list')

    if kind == CHARACTERISTIC_KIND:
        values = {}
        for index, entry in enumerate(entries):
            where = f'values[{index}]'
            if not isinstance(entry, dict):
                raise InputError(f'{where}: expected an object')
            coalition = _coalition(entry.get('coalition'), n, where)
            if coalition in values:
                raise InputError(f'{where}: duplicate value for coalition {entry["coalition"]}')
            values[coalition] = _value(entry, where)
        game: AnyWorth = CharacteristicFunctionGame(n, values)
    elif kind == PARTITION_KIND:
        embedded = {}
        for index, entry in enumerate(entries):
            where = f'values[{index}]'
            if not isinstance(entry, dict):
                raise InputError(f'{where}: expected an object')
            try:
                partition = Partition.parse(entry.get('partition'), n)
            except InputError as e:
                raise InputError(f'{where}: {e}') from e
            coalition = _coalition(entry.get('coalition'), n, where)
            if coalition not in partition:
                raise InputError(f'{where}: coalition {entry["coalition"]} is not a block of {partition}')
            if (coalition, partition) in embedded:
                raise InputError(f'{where}: duplicate value for v({entry["coalition"]}, {partition})')
            embedded[(coalition, partition)] = _value(entry, where)
        game = PartitionFunctionGame(n, embedded)
    else:
        raise InputError(f'unknown worth kind "{kind}", expected "{PARTITION_KIND}" or "{CHARACTERISTIC_KIND}"')

    market, model = None, None
    if 'market' in data:
        raw = data['market']
        if not isinstance(raw, dict):
            raise InputError('"market" must be an object')
        model = raw.get('model', COURNOT)
        if model not in MARKET_MODELS:
            raise InputError(f'unknown market model "{model}"')
        try:
            market = Market.create(raw['a'], raw['b'], raw['costs'])
        except (KeyError, TypeError) as e:
            raise InputError(f'"market" needs "a", "b" and "costs": {e}') from e
        if market.n != n:
            raise InputError(f'market has {market.n} firms, game has {n} players')
    return WorthFile(game, market, model)


def _value(entry: Dict[str, Any], where: str):
    if 'value' not in entry:
        raise InputError(f'{where}: missing "value"')
    try:
        return parse_rational(entry['value'])
    except InputError as e:
        raise InputError(f'{where}: {e}') from e


def read_json(path: str) -> Any:
    """Load a JSON document, mapping I/O and syntax errors to InputError."""
    try:
        with open(path, encoding='utf-8') as handle:
            return json.load(handle)
    except OSError as e:
        raise InputError(f'{path}: cannot read file ({e.strerror})') from e
    except json.JSONDecodeError as e:
        raise InputError(f'{path}:{e.lineno}:{e.colno}: malformed JSON ({e.msg})') from e


def write_json(path: str, data: Any) -> None:
    try:
        with open(path, 'w', encoding='utf-8') as handle:
            json.dump(data, handle, indent=2)
            handle.write('\n')
    except OSError as e:
        raise InputError(f'{path}: cannot write file ({e.strerror})') from e
    logger.info(f'Wrote {path}')


def load_worth(path: str) -> WorthFile:
    """Read a worth file."""
    try:
        return worth_from_dict(read_json(path))
    except InputError as e:
        if str(e).startswith(path):
            raise
        raise InputError(f'{path}: {e}') from e


def save_worth(path: str, game: AnyWorth, market: Optional[Market] = None, model: Optional[str] = None) -> None:
    """Write a worth file."""
    write_json(path, worth_to_dict(game, market, model))
