import pytest
from hypothesis import given, strategies as st

from coop2nf.combinatorics import (
    Partition,
    bell_number,
    coalition_of,
    complement_split,
    enumerate_partitions,
    is_refinement,
    least_member,
    members,
    singletons_and,
    size,
)
from coop2nf.errors import InputError


def test_bell_numbers():
    assert [bell_number(n) for n in range(1, 9)] == [1, 2, 5, 15, 52, 203, 877, 4140]


@pytest.mark.parametrize('n', range(1, 8))
def test_enumeration_counts_and_uniqueness(n):
    partitions = enumerate_partitions(n)
    assert len(partitions) == bell_number(n)
    assert len(set(partitions)) == len(partitions)


def test_enumeration_order_for_three_players():
    assert [str(p) for p in enumerate_partitions(3)] == [
        '[[0,1,2]]', '[[0,1],[2]]', '[[0,2],[1]]', '[[0],[1,2]]', '[[0],[1],[2]]',
    ]


@pytest.mark.parametrize('n', range(1, 7))
def test_first_is_grand_last_is_finest(n):
    partitions = enumerate_partitions(n)
    assert partitions[0] == Partition.grand(n)
    assert partitions[-1] == Partition.finest(n)


def test_enumeration_rejects_bad_counts():
    with pytest.raises(InputError):
        enumerate_partitions(0)
    with pytest.raises(InputError):
        enumerate_partitions(13)


def test_coalition_helpers():
    assert members(0b1011) == (0, 1, 3)
    assert coalition_of([0, 1, 3]) == 0b1011
    assert size(0b1011) == 3
    assert least_member(0b1100) == 2


def test_parse_canonicalizes_and_validates():
    assert Partition.parse('[[1,2],[0]]') == Partition(3, (0b001, 0b110))
    assert Partition.parse([[2], [0, 1]], 3).to_lists() == [[0, 1], [2]]
    for bad in ('[[0],[0,1]]', '[[0],[2]]', 'not json', '[0, 1]', '[[0], [-1]]'):
        with pytest.raises(InputError):
            Partition.parse(bad, 3)


def test_partition_rejects_overlap_and_gaps():
    with pytest.raises(InputError):
        Partition(3, (0b011, 0b110))
    with pytest.raises(InputError):
        Partition(3, (0b001, 0b010))
    with pytest.raises(InputError):
        Partition(3, (0b110, 0b001))


def test_merge_and_block_of():
    finest = Partition.finest(3)
    merged = finest.merge(0b001, 0b100)
    assert merged.to_lists() == [[0, 2], [1]]
    assert merged.block_of(2) == 0b101
    with pytest.raises(InputError):
        merged.merge(0b101, 0b101)


def test_deviation_partitions():
    assert singletons_and(0b010, 3).to_lists() == [[0], [1], [2]]
    assert singletons_and(0b101, 3).to_lists() == [[0, 2], [1]]
    assert complement_split(0b010, 3).to_lists() == [[0, 2], [1]]
    assert complement_split(0b111, 3) == Partition.grand(3)


def test_refinement():
    finest, grand = Partition.finest(3), Partition.grand(3)
    middle = Partition.parse('[[0,1],[2]]')
    assert is_refinement(finest, middle) == (True, True)
    assert is_refinement(middle, grand) == (True, True)
    assert is_refinement(middle, middle) == (True, False)
    assert is_refinement(grand, middle) == (False, False)
    assert is_refinement(Partition.parse('[[0,2],[1]]'), middle) == (False, False)


@given(st.integers(min_value=1, max_value=5), st.data())
def test_refinement_is_a_partial_order(n, data):
    partitions = enumerate_partitions(n)
    first = data.draw(st.sampled_from(partitions))
    second = data.draw(st.sampled_from(partitions))
    third = data.draw(st.sampled_from(partitions))
    assert is_refinement(first, first)[0]
    if is_refinement(first, second)[0] and is_refinement(second, first)[0]:
        assert first == second
    if is_refinement(first, second)[0] and is_refinement(second, third)[0]:
        assert is_refinement(first, third)[0]
    assert is_refinement(Partition.finest(n), first)[0]
    assert is_refinement(first, Partition.grand(n))[0]
