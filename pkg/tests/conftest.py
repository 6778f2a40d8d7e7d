"""Shared fixtures: the three-firm reference market and the small worth games."""

from fractions import Fraction

import numpy as np
import pytest

from coop2nf.metrics import metrics
from coop2nf.oligopoly import Market, cournot_worth
from coop2nf.worth import example_one_game, example_two_game

EXAMPLE_TWO = (3, 1, 3, 1, 3, 1, 13)
SEEDS = range(25)


@pytest.fixture(autouse=True)
def _reset_metrics():
    metrics.reset()
    yield


@pytest.fixture
def market_a() -> Market:
    """a = 100, b = 1, costs 10 < 20 < 30."""
    return Market.create(100, 1, [10, 20, 30])


@pytest.fixture
def cournot_a(market_a):
    return cournot_worth(market_a)


@pytest.fixture
def example_one():
    return example_one_game(3)


@pytest.fixture
def example_two():
    return example_two_game(*EXAMPLE_TWO)


def random_markets(count: int, seed: int = 7):
    """Valid interior markets with 2..4 firms and integer data."""
    rng = np.random.default_rng(seed)
    markets = []
    for _ in range(count):
        n = int(rng.integers(2, 5))
        costs = sorted(int(c) for c in rng.choice(np.arange(1, 60), size=n, replace=False))
        a = (n + 1) * costs[-1] + int(rng.integers(1, 100))
        b = Fraction(int(rng.integers(1, 9)), int(rng.integers(1, 4)))
        markets.append(Market.create(a, b, costs))
    return markets
