from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from coop2nf.combinatorics import Partition, enumerate_partitions, grand_coalition, members
from coop2nf.construction import GammaGame
from coop2nf.errors import AmbiguityError, InputError
from coop2nf.normal_form import (
    CompositeGame,
    DenseGame,
    StrategyLabel,
    coalition_payoff,
    kappa,
    rho,
    rho_partition,
    to_dense,
)
from coop2nf.worth import STRICT_PFG, example_two_game, generate_random


def prisoners_dilemma() -> DenseGame:
    strategies = [['C', 'D'], ['C', 'D']]
    payoffs = {
        (0, 0): (3, 3), (0, 1): (0, 5),
        (1, 0): (5, 0), (1, 1): (1, 1),
    }
    return DenseGame(strategies, payoffs)


def test_dense_game_requires_full_table():
    with pytest.raises(InputError, match='first missing profile'):
        DenseGame([['C', 'D'], ['C', 'D']], {(0, 0): (1, 1)})
    with pytest.raises(InputError):
        DenseGame([['C'], ['C']], {(0, 0): (1,)})
    with pytest.raises(InputError):
        DenseGame([['C', 'C'], ['C']], {(0, 0): (1, 1), (1, 0): (1, 1)})


def test_coalition_payoff_sums_members():
    game = prisoners_dilemma()
    assert coalition_payoff(game, 0b11, (0, 1)) == 5
    assert coalition_payoff(game, 0b10, (0, 1)) == 5
    with pytest.raises(InputError):
        coalition_payoff(game, 0, (0, 1))


def test_index_and_labels():
    game = prisoners_dilemma()
    assert game.index_of(1, 'D') == 1
    assert game.profile_labels((1, 0)) == ['D', 'C']
    assert game.num_profiles == 4
    with pytest.raises(InputError):
        game.index_of(0, 'X')


def test_rho_needs_a_registry():
    with pytest.raises(InputError):
        rho(prisoners_dilemma(), (0, 0), 0)


def test_rho_and_kappa_on_gamma(example_two):
    game = GammaGame(example_two, 2)
    profile = game.profile_of([0b011, 0b011, 0b110])
    assert rho(game, profile, 0) == 0b011
    assert rho(game, profile, 1) == 0b011
    assert rho(game, profile, 2) == 0
    assert kappa(game, profile, 0b111) == 2
    assert rho_partition(game, profile) is None
    full = game.profile_of([0b001, 0b110, 0b110])
    assert rho_partition(game, full) == Partition.parse('[[0],[1,2]]')


def test_rho_reports_ambiguity():
    game = prisoners_dilemma()
    # both {1} and {1,2} claim player 1 when everybody plays C
    game.set_registry({0b01: (0,), 0b11: (0, 0)})
    with pytest.raises(AmbiguityError):
        rho(game, (0, 0), 0)
    assert rho(game, (0, 1), 0) == 0b01


def test_composite_assemble_and_split(example_two):
    game = GammaGame(example_two, 2)
    cg = CompositeGame(game, Partition.parse('[[0,2],[1]]'))
    assert cg.blocks == (0b101, 0b010)
    assert len(cg.joint_strategies(0b101)) == 16
    assert cg.others(0b101) == (0b010,)
    profile = cg.assemble(0b101, (1, 2), [(3,)])
    assert profile == (1, 3, 2)
    assert cg.split(profile, 0b101) == (1, 2)
    assert cg.payoff(0b101, profile) == game.coalition_payoff(0b101, profile)
    with pytest.raises(InputError):
        cg.joint_strategies(0b011)


def test_to_dense_keeps_payoffs_and_registry(example_one):
    game = GammaGame(example_one, 2)
    dense = to_dense(game)
    assert all(dense.payoff(p) == game.payoff(p) for p in game.profiles())
    assert dense.registry == game.registry
    assert isinstance(dense.strategies[0][0], StrategyLabel)


@settings(max_examples=50, deadline=None)
@given(st.data())
def test_composite_payoff_is_additive_over_blocks(data):
    game = GammaGame(example_two_game(3, 1, 3, 1, 3, 1, 13), Fraction(5))
    profile = tuple(data.draw(st.integers(0, len(s) - 1)) for s in game.strategies)
    partition = data.draw(st.sampled_from([
        Partition.grand(3), Partition.parse('[[0,1],[2]]'), Partition.finest(3),
    ]))
    total = sum(CompositeGame(game, partition).block_payoffs(profile))
    assert total == sum(game.payoff(profile))
    assert sum(game.coalition_payoff(1 << i, profile) for i in members(0b111)) == total


def kappa_is_additive(game: GammaGame, profile) -> bool:
    total = kappa(game, profile, grand_coalition(game.n))
    return all(
        sum(kappa(game, profile, block) for block in partition) == total
        for partition in enumerate_partitions(game.n)
    )


@pytest.mark.parametrize('n', [2, 3])
def test_kappa_is_additive_over_every_partition(n):
    game = GammaGame(generate_random(n, STRICT_PFG, 1), 1)
    assert all(kappa_is_additive(game, profile) for profile in game.profiles())


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_kappa_is_additive_for_four_players(data):
    game = GammaGame(generate_random(4, STRICT_PFG, 2), 1)
    profile = tuple(data.draw(st.integers(0, len(s) - 1)) for s in game.strategies)
    assert kappa_is_additive(game, profile)


@pytest.mark.parametrize('n', [2, 3, 4])
def test_rho_is_well_defined_on_every_profile(n):
    game = GammaGame(generate_random(n, STRICT_PFG, 3), 1, cache=False)
    for profile in game.profiles():
        tags = game.tags(profile)
        for player in range(n):
            attributed = rho(game, profile, player)
            # attributed iff every member of the announced tag announces it too
            expected = tags[player] if all(tags[j] == tags[player] for j in members(tags[player])) else 0
            assert attributed == expected
