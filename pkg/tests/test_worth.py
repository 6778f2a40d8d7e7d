from fractions import Fraction

import pytest

from coop2nf.combinatorics import Partition, enumerate_partitions
from coop2nf.errors import InputError
from coop2nf.worth import (
    NONE,
    STRICT,
    STRICT_PFG,
    WEAK_CF,
    WEAK_ONLY,
    WEAK_PFG,
    CharacteristicFunctionGame,
    PartitionFunctionGame,
    classify_superadditivity,
    example_one_game,
    example_two_game,
    externality_report,
    generate_random,
)

from conftest import SEEDS


def test_incomplete_worth_map_names_the_missing_entry():
    values = {(0b11, Partition.grand(2)): Fraction(3), (0b01, Partition.finest(2)): Fraction(0)}
    with pytest.raises(InputError, match=r'missing v\(\[1\], \[\[0\],\[1\]\]\)'):
        PartitionFunctionGame(2, values)


def test_value_rejects_coalitions_outside_the_partition(example_one):
    with pytest.raises(InputError):
        example_one.value(0b01, Partition.grand(2))
    assert example_one.value(0, Partition.grand(2)) == 0


def test_instance_a_values(cournot_a):
    finest = Partition.finest(3)
    assert [cournot_a.value(1 << i, finest) for i in range(3)] == [900, 400, 100]
    split = Partition.parse('[[0,1],[2]]')
    assert cournot_a.value(0b011, split) == Fraction(12100, 9)
    assert cournot_a.value(0b100, split) == Fraction(2500, 9)
    other = Partition.parse('[[0,2],[1]]')
    assert cournot_a.value(0b101, other) == Fraction(10000, 9)
    assert cournot_a.value(0b010, other) == Fraction(4900, 9)
    assert cournot_a.grand_value == 2025


def test_superadditivity_classes(example_one, cournot_a):
    assert classify_superadditivity(example_one).classification == STRICT
    assert classify_superadditivity(cournot_a).classification == STRICT
    assert classify_superadditivity(example_one_game(0)).classification == WEAK_ONLY
    report = classify_superadditivity(example_one_game(-1))
    assert report.classification == NONE
    witness = report.violations[0]
    assert (witness.first, witness.second, witness.separate, witness.merged) == (0b01, 0b10, 0, -1)


def test_characteristic_classification_matches_lift():
    game = CharacteristicFunctionGame(3, {
        0b001: 1, 0b010: 1, 0b100: 1, 0b011: 2, 0b101: 3, 0b110: 3, 0b111: 5,
    })
    assert game.superadditivity().classification == WEAK_ONLY
    assert classify_superadditivity(game.lift()).classification == WEAK_ONLY
    assert classify_superadditivity(game).classification == WEAK_ONLY


def test_characteristic_requires_every_coalition():
    with pytest.raises(InputError):
        CharacteristicFunctionGame(2, {0b01: 1, 0b11: 2})
    with pytest.raises(InputError):
        CharacteristicFunctionGame(2, {0: 1, 0b01: 1, 0b10: 1, 0b11: 2})


def test_partition_independence_and_reduction(example_one, example_two):
    assert example_one.is_partition_independent()
    reduced = example_one.to_characteristic()
    assert reduced.value(0b11) == 3
    assert reduced.lift() == example_one
    assert not example_two.is_partition_independent()
    with pytest.raises(InputError):
        example_two.to_characteristic()


def test_example_two_layout(example_two):
    split = Partition.parse('[[1,2],[0]]')
    assert example_two.value(0b110, split) == 3
    assert example_two.value(0b001, split) == 1
    assert example_two.grand_value == 13
    assert all(example_two.value(1 << i, Partition.finest(3)) == 0 for i in range(3))


def test_cournot_externalities_are_positive(cournot_a):
    report = externality_report(cournot_a)
    assert report.positive and not report.negative
    witness = next(w for w in report.positive if w.affected == 0b010)
    assert (witness.before, witness.after) == (400, Fraction(4900, 9))


def test_externalities_need_three_blocks(example_one):
    report = externality_report(example_one)
    assert not report.positive and not report.negative


@pytest.mark.parametrize('n', [2, 3, 4])
@pytest.mark.parametrize('kind, expected', [(STRICT_PFG, STRICT), (WEAK_CF, WEAK_ONLY), (WEAK_PFG, WEAK_ONLY)])
def test_random_games_have_the_requested_class(n, kind, expected):
    for seed in SEEDS:
        game = generate_random(n, kind, seed)
        assert classify_superadditivity(game).classification == expected
        if kind == WEAK_CF:
            assert game.is_partition_independent()


def test_random_generation_is_deterministic():
    assert generate_random(3, STRICT_PFG, 11) == generate_random(3, STRICT_PFG, 11)


def test_weak_pfg_has_externalities_somewhere():
    games = [generate_random(4, WEAK_PFG, seed) for seed in SEEDS]
    assert any(not game.is_partition_independent() for game in games)


def test_random_generation_rejects_bad_arguments():
    with pytest.raises(InputError):
        generate_random(1, STRICT_PFG, 0)
    with pytest.raises(InputError):
        generate_random(3, 'convex', 0)


def test_every_embedded_coalition_is_tabulated(example_two):
    expected = sum(len(p) for p in enumerate_partitions(3))
    assert len(list(example_two.embedded_coalitions())) == expected


@pytest.mark.slow
@pytest.mark.parametrize('n', [2, 3, 4])
def test_strict_generator_over_a_hundred_seeds(n):
    for seed in range(100):
        assert classify_superadditivity(generate_random(n, STRICT_PFG, seed)).classification == STRICT, seed
