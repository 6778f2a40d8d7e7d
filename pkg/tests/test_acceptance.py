"""End-to-end properties of the construction and the oligopoly analyses."""

from fractions import Fraction

import pytest

from coop2nf.combinatorics import bell_number, enumerate_partitions
from coop2nf.construction import PASS, GammaGame, auto_theta, theta_bar, verify_implementation
from coop2nf.normal_form import CompositeGame
from coop2nf.oligopoly import Market, bertrand_characteristic, cournot_oracle, cournot_worth, maximin_worth
from coop2nf.solutions import (
    DELTA,
    GAMMA,
    PLAIN,
    check_convexity,
    core_feasible,
    core_violations,
    delta_singleton_sum_test,
    gamma_characteristic,
    shapley,
    sqrt_supermodularity_report,
)
from coop2nf.solvers import NASH, RATIONALIZABILITY, THP, thp_certify
from coop2nf.worth import (
    STRICT,
    STRICT_PFG,
    WEAK_CF,
    WEAK_ONLY,
    WEAK_PFG,
    classify_superadditivity,
    externality_report,
    generate_random,
)

from conftest import SEEDS, random_markets


def implemented(worth) -> GammaGame:
    return GammaGame(worth, theta_bar(worth) + 1)


@pytest.mark.parametrize('n', [2, 3, pytest.param(4, marks=pytest.mark.slow)])
def test_strict_games_are_implemented_in_nash_equilibrium(n):
    for seed in SEEDS:
        worth = generate_random(n, STRICT_PFG, seed)
        assert classify_superadditivity(worth).classification == STRICT
        report = verify_implementation(implemented(worth), worth, NASH)
        assert report.verdict == PASS, (n, seed, report.witnesses)
        assert report.bijection is True
        assert len(report.partitions) == bell_number(n)
        assert all(len(result.solutions.profiles) == 1 for result in report.partitions)


@pytest.mark.parametrize('n', [2, 3, pytest.param(4, marks=pytest.mark.slow)])
def test_strict_games_are_implemented_in_rationalizable_strategies(n):
    for seed in SEEDS:
        worth = generate_random(n, STRICT_PFG, seed)
        game = implemented(worth)
        nash = verify_implementation(game, worth, NASH)
        report = verify_implementation(game, worth, RATIONALIZABILITY)
        assert report.verdict == PASS, (n, seed, report.witnesses)
        for survivors, equilibrium in zip(report.partitions, nash.partitions):
            assert survivors.solutions.profiles == equilibrium.solutions.profiles


@pytest.mark.parametrize('n', [2, 3])
def test_weak_characteristic_games_are_implemented(n):
    for seed in SEEDS:
        worth = generate_random(n, WEAK_CF, seed)
        assert worth.is_partition_independent()
        assert classify_superadditivity(worth).classification == WEAK_ONLY
        game = implemented(worth)
        report = verify_implementation(game, worth, NASH)
        assert report.verdict == PASS, (n, seed, report.witnesses)
        assert all(result.solutions.payoff_unique for result in report.partitions)
        assert report.bijection is None


@pytest.mark.slow
@pytest.mark.parametrize('n', [2, 3])
def test_weak_characteristic_games_are_perfect(n):
    for seed in SEEDS:
        worth = generate_random(n, WEAK_CF, seed)
        assert verify_implementation(implemented(worth), worth, THP).verdict == PASS, (n, seed)


def test_weak_partition_games_are_certified_in_every_composite_game():
    for seed in range(10):
        worth = generate_random(3, WEAK_PFG, seed)
        game = implemented(worth)
        for partition in enumerate_partitions(3):
            certificate = thp_certify(CompositeGame(game, partition))
            assert certificate.certified, (seed, partition, certificate.failure)
            assert all(check.passed for check in certificate.epsilon_checks)
            blocks = [
                sum(game.payoff(certificate.profile)[i] for i in range(3) if coalition >> i & 1)
                for coalition in partition
            ]
            assert blocks == [worth.value(coalition, partition) for coalition in partition]


def test_auto_theta_is_one_above_the_threshold():
    worth = generate_random(3, STRICT_PFG, 42)
    assert auto_theta(worth) == theta_bar(worth) + 1


def test_oracle_agrees_with_closed_form_on_random_markets():
    markets = random_markets(50)
    assert {market.n for market in markets} == {2, 3, 4}
    for market in markets:
        worth = cournot_worth(market)
        for partition in enumerate_partitions(market.n):
            outcome = cournot_oracle(market, partition)
            for block, profit in zip(partition, outcome.profits):
                exact = float(worth.value(block, partition))
                assert abs(profit - exact) / max(1.0, abs(exact)) < 1e-9


def test_cournot_mergers_only_help_outsiders():
    for market in random_markets(50):
        if market.n < 3:
            continue
        report = externality_report(cournot_worth(market))
        assert report.positive
        assert not report.negative


def test_cores_of_instance_a(market_a, cournot_a):
    gamma = core_feasible(cournot_a, GAMMA)
    assert gamma.feasible and gamma.witness is not None
    assert core_violations(cournot_a, [1200, 500, 325], GAMMA) == []
    # the closed-form singleton sum stays below the grand coalition, so the delta core is not empty here
    test = delta_singleton_sum_test(cournot_a, market_a)
    assert test.lhs == Fraction(17400, 9)
    assert test.lhs < market_a.monopoly_profit < test.printed_lhs
    assert core_feasible(cournot_a, DELTA).feasible


@pytest.mark.parametrize('market', [
    Market.create(100, 1, ['10', '101/10', '102/10', '103/10', '104/10']),
    Market.create(1000, 1, [10, 20, 30]),
])
def test_delta_core_emptiness_is_certified(market):
    game = cournot_worth(market)
    assert delta_singleton_sum_test(game, market).empty_certified
    result = core_feasible(game, DELTA)
    assert not result.feasible
    assert result.certificate is not None


def test_bertrand_instance_a(market_a):
    game = bertrand_characteristic(market_a)
    phi = shapley(game)
    assert phi.values == (Fraction(7850, 6), Fraction(3050, 6), Fraction(1250, 6))
    assert phi[0] > phi[1] > phi[2]
    assert check_convexity(game).convex
    assert core_violations(game, phi.values, PLAIN) == []


def test_margin_report_of_instance_a(market_a, cournot_a):
    gc = gamma_characteristic(cournot_a, market_a)
    report = sqrt_supermodularity_report(gc)
    assert not report.pair(0b001, 0b010).holds
    assert report.pair(0b011, 0b101).holds
    assert check_convexity(gc.characteristic()).convex


def test_maximin_splits_the_monopoly_profit(market_a):
    assert shapley(maximin_worth(market_a)).values == (675, 675, 675)


def test_bertrand_shapley_rewards_low_costs():
    for market in random_markets(20, seed=11):
        game = bertrand_characteristic(market)
        phi = shapley(game)
        assert phi.total == game.grand_value
        assert all(phi[i] > phi[i + 1] for i in range(market.n - 1))
        if check_convexity(game).convex:
            assert core_violations(game, phi.values, PLAIN) == []
