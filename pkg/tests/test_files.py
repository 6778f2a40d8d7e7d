import json

import pytest

from coop2nf.construction import GammaGame
from coop2nf.errors import InputError
from coop2nf.files.games import game_from_dict, game_to_dict, load_game, save_game
from coop2nf.files.reports import render_json, render_text
from coop2nf.files.worth import (
    COURNOT,
    load_worth,
    save_worth,
    worth_from_dict,
    worth_to_dict,
)
from coop2nf.normal_form import DenseGame
from coop2nf.oligopoly import bertrand_characteristic


def test_worth_round_trip(cournot_a, market_a, tmp_path):
    path = tmp_path / 'worth.json'
    save_worth(str(path), cournot_a, market_a, COURNOT)
    loaded = load_worth(str(path))
    assert loaded.game == cournot_a
    assert loaded.market == market_a
    assert loaded.model == COURNOT
    assert worth_to_dict(loaded.game, loaded.market, loaded.model) == json.loads(path.read_text())


def test_worth_file_layout(example_one):
    data = worth_to_dict(example_one)
    assert data['kind'] == 'partition'
    assert data['values'][0] == {'partition': [[0, 1]], 'coalition': [0, 1], 'value': '3'}
    assert data['values'][1] == {'partition': [[0], [1]], 'coalition': [0], 'value': '0'}


def test_characteristic_round_trip(market_a):
    game = bertrand_characteristic(market_a)
    data = worth_to_dict(game)
    assert data['kind'] == 'characteristic'
    assert worth_from_dict(data).game == game


def test_incomplete_worth_file_names_location(example_one, tmp_path):
    data = worth_to_dict(example_one)
    data['values'].pop()
    path = tmp_path / 'short.json'
    path.write_text(json.dumps(data))
    with pytest.raises(InputError, match=r'short\.json.*missing v\(\[1\]'):
        load_worth(str(path))


@pytest.mark.parametrize('mutate, message', [
    (lambda d: d['values'].append(dict(d['values'][0])), 'duplicate'),
    (lambda d: d['values'][0].update(value=1.5), 'floats are not accepted'),
    (lambda d: d['values'][0].update(coalition=[0, 5]), 'coalition'),
    (lambda d: d['values'][0].update(partition=[[0], [0, 1]]), r'values\[0\]'),
    (lambda d: d['values'][0].update(coalition=[1]), 'not a block'),
    (lambda d: d.update(kind='matrix'), 'unknown worth kind'),
    (lambda d: d.update(market={'model': 'auction', 'a': '1', 'b': '1', 'costs': []}), 'market model'),
])
def test_malformed_worth_documents(example_one, mutate, message):
    data = worth_to_dict(example_one)
    mutate(data)
    with pytest.raises(InputError, match=message):
        worth_from_dict(data)


def test_unreadable_and_malformed_files(tmp_path):
    with pytest.raises(InputError, match='cannot read'):
        load_worth(str(tmp_path / 'missing.json'))
    broken = tmp_path / 'broken.json'
    broken.write_text('{"players": 2,')
    with pytest.raises(InputError, match=r'broken\.json:1:\d+: malformed JSON'):
        load_worth(str(broken))


def test_lazy_game_round_trip(example_two, tmp_path):
    game = GammaGame(example_two, 3)
    path = tmp_path / 'gamma.json'
    save_game(str(path), game)
    loaded = load_game(str(path))
    assert isinstance(loaded, GammaGame)
    assert loaded.theta == 3
    assert loaded.worth == example_two
    assert json.loads(path.read_text())['kind'] == 'gamma-construction'


def test_dense_game_round_trip(example_one, tmp_path):
    game = GammaGame(example_one, 2)
    path = tmp_path / 'dense.json'
    save_game(str(path), game, dense=True)
    loaded = load_game(str(path))
    assert isinstance(loaded, DenseGame)
    assert [[str(s) for s in player] for player in loaded.strategies] == [['1:{1}', '1:{1,2}'], ['2:{2}', '2:{1,2}']]
    assert all(loaded.payoff(p) == game.payoff(p) for p in game.profiles())
    assert game_to_dict(loaded) == game_to_dict(game, dense=True)


def test_dense_file_layout(example_one):
    data = game_to_dict(GammaGame(example_one, 2), dense=True)
    assert data['payoffs'][1] == {'profile': [0, 1], 'u': ['3', '-4']}
    assert data['strategies'] == [['1:{1}', '1:{1,2}'], ['2:{2}', '2:{1,2}']]


@pytest.mark.parametrize('mutate, message', [
    (lambda d: d['payoffs'].pop(), 'first missing profile'),
    (lambda d: d['payoffs'].append(dict(d['payoffs'][0])), 'duplicate'),
    (lambda d: d['strategies'][0].append('2:{2}'), 'belongs to player 2'),
    (lambda d: d['payoffs'][0].update(profile=['1:{1}', '2:{1}']), 'not a strategy of player 2'),
    (lambda d: d['payoffs'][0].update(profile=[0, 2]), 'out of range for player 2'),
    (lambda d: d['payoffs'][0].update(profile=[0, True]), 'not a strategy of player 2'),
    (lambda d: d['payoffs'][0].update(profile=['1:{1}']), 'expected 2'),
    (lambda d: d.update(kind='extensive'), 'unknown game kind'),
])
def test_malformed_dense_documents(example_one, mutate, message):
    data = game_to_dict(GammaGame(example_one, 2), dense=True)
    mutate(data)
    with pytest.raises(InputError, match=message):
        game_from_dict(data)


def test_text_report_is_aligned():
    text = render_text({'verdict': 'pass', 'theta': '3/2', 'payoffs': ['1', '2'], 'nested': {'ok': True}})
    assert text.splitlines() == [
        'verdict  pass',
        'theta    3/2',
        'payoffs  (1, 2)',
        'nested:',
        '  ok  yes',
    ]
    assert json.loads(render_json({'a': [1]})) == {'a': [1]}


def test_dense_document_with_index_profiles_and_opaque_labels(tmp_path):
    document = {
        'players': 2,
        'strategies': [['cooperate', 'defect'], ['cooperate', 'defect']],
        'payoffs': [
            {'profile': [0, 0], 'u': ['3', '3']},
            {'profile': [0, 1], 'u': ['0', '5']},
            {'profile': [1, 0], 'u': ['5', '0']},
            {'profile': [1, 1], 'u': ['1', '1']},
        ],
    }
    game = game_from_dict(document)
    assert isinstance(game, DenseGame)
    assert game.strategies == (('cooperate', 'defect'), ('cooperate', 'defect'))
    assert game.payoff((0, 1)) == (0, 5)
    assert game.profile_labels((1, 0)) == ['defect', 'cooperate']

    path = tmp_path / 'dilemma.json'
    save_game(str(path), game)
    written = json.loads(path.read_text())
    assert written['kind'] == 'dense-table'
    assert written['strategies'] == document['strategies']
    assert written['payoffs'] == document['payoffs']
    assert load_game(str(path)).payoff((1, 1)) == (1, 1)


def test_label_text_profiles_are_accepted(example_one):
    data = game_to_dict(GammaGame(example_one, 2), dense=True)
    for row in data['payoffs']:
        row['profile'] = [data['strategies'][player][index] for player, index in enumerate(row['profile'])]
    loaded = game_from_dict(data)
    assert game_to_dict(loaded) == game_to_dict(GammaGame(example_one, 2), dense=True)
