from fractions import Fraction

import pytest

from coop2nf.combinatorics import Partition, enumerate_partitions
from coop2nf.errors import InputError, InteriorViolation, OracleError
from coop2nf.metrics import metrics
from coop2nf.oligopoly import (
    Market,
    bertrand_characteristic,
    bertrand_worth,
    cournot_oracle,
    cournot_outcome,
    cournot_worth,
    interior_check,
    maximin_worth,
)

from conftest import random_markets


@pytest.mark.parametrize('a, b, costs', [
    (100, 0, [10, 20]),
    (100, 1, [20, 10]),
    (100, 1, [10, 10]),
    (25, 1, [10, 30]),
    (100, 1, []),
    (100, 1, list(range(1, 10))),
])
def test_invalid_markets(a, b, costs):
    with pytest.raises(InputError):
        Market.create(a, b, costs)


def test_interior_violation_is_reported():
    market = Market.create(40, 1, [10, 20, 30])
    report = interior_check(market)
    assert not report.ok
    with pytest.raises(InteriorViolation) as excinfo:
        cournot_worth(market)
    assert excinfo.value.violating == report.violating


def test_exact_outcome_matches_worth(market_a, cournot_a):
    for partition in enumerate_partitions(3):
        outcome = cournot_outcome(market_a, partition)
        for block, profit in zip(partition, outcome.profits):
            assert profit == cournot_a.value(block, partition)
    finest = cournot_outcome(market_a, Partition.finest(3))
    assert finest.quantities == (30, 20, 10)
    assert finest.price == 40


def test_oracle_agrees_on_instance_a(market_a, cournot_a):
    for partition in enumerate_partitions(3):
        outcome = cournot_oracle(market_a, partition)
        for block, profit in zip(partition, outcome.profits):
            exact = float(cournot_a.value(block, partition))
            assert abs(profit - exact) <= 1e-9 * max(1.0, abs(exact))
    assert metrics.oracle_iterations > 0


def test_oracle_gives_up_when_capped(market_a):
    with pytest.raises(OracleError):
        cournot_oracle(market_a, Partition.finest(3), max_iter=2)


def test_oracle_on_random_markets():
    for market in random_markets(10, seed=3):
        worth = cournot_worth(market)
        for partition in enumerate_partitions(market.n):
            outcome = cournot_oracle(market, partition)
            for block, profit in zip(partition, outcome.profits):
                exact = float(worth.value(block, partition))
                assert abs(profit - exact) <= 1e-9 * max(1.0, abs(exact))


def test_bertrand_values(market_a):
    game = bertrand_characteristic(market_a)
    assert dict(game.items()) == {
        0b001: 800, 0b010: 0, 0b011: 1400, 0b100: 0, 0b101: 800, 0b110: 0, 0b111: 2025,
    }
    assert bertrand_worth(market_a).is_partition_independent()


def test_maximin_values(market_a):
    game = maximin_worth(market_a)
    assert game.grand_value == 2025
    assert all(value == 0 for coalition, value in game.items() if coalition != 0b111)


def test_monopoly_profit(market_a):
    assert market_a.monopoly_profit == 2025
    assert market_a.cartel_cost(0b110) == 20
    assert market_a.to_dict() == {'a': '100', 'b': '1', 'costs': ['10', '20', '30']}


def test_rational_data():
    market = Market.create('100', '1/2', ['10', '101/10', '10.2'])
    assert market.costs == (Fraction(10), Fraction(101, 10), Fraction(51, 5))
    worth = cournot_worth(market)
    assert worth.grand_value == Fraction(90) ** 2 / (4 * Fraction(1, 2))
