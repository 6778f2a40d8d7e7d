"""
Command-line front end.

Every verb loads its inputs, runs one module pipeline and emits a report to
stdout. Exit status: 0 when the checked property holds, 1 when it fails (the
report carries the witness), 2 for input or usage errors.
"""

import argparse
import sys
from typing import Any, Callable, Dict, List, Optional, Sequence

from . import __version__
from .combinatorics import enumerate_partitions
from .config import LOG_LEVELS, Config, load_config
from .construction import PASS, GammaGame, auto_theta, theta_bar, verify_implementation
from .errors import ConfigError, Coop2nfError, InputError, OracleError
from .files.games import load_game, save_game
from .files.reports import emit
from .files.worth import BERTRAND, COURNOT, MAXIMIN, WorthFile, load_worth, save_worth
from .logger import log_section, logger, setup_logger
from .metrics import metrics
from .normal_form import DENSE, GAMMA_LAZY, CompositeGame
from .oligopoly import Market, bertrand_worth, cournot_oracle, cournot_worth, maximin_worth
from .solutions import (
    CORE_VARIANTS,
    DELTA,
    PLAIN,
    check_convexity,
    core_feasible,
    core_system,
    core_violations,
    delta_singleton_sum_test,
    gamma_characteristic,
    shapley,
    sqrt_supermodularity_report,
)
from .solvers import CONCEPTS, NASH, solve_composite
from .utils import format_coalition, format_rational, format_vector, parse_costs, parse_rational
from .worth import (
    NONE,
    RANDOM_KINDS,
    WEAK_CF,
    CharacteristicFunctionGame,
    SuperadditivityWitness,
    classify_superadditivity,
    externality_report,
    generate_random,
)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2

AUTO = 'auto'


class _Outcome:
    """A report plus the exit status it implies."""

    def __init__(self, report: Dict[str, Any], ok: bool = True):
        self.report = report
        self.ok = ok


def _superadditivity_witness(witness: SuperadditivityWitness) -> Dict[str, Any]:
    return {
        'first': format_coalition(witness.first),
        'second': format_coalition(witness.second),
        'partition': witness.partition.to_lists() if witness.partition is not None else None,
        'separate': format_rational(witness.separate),
        'merged': format_rational(witness.merged),
    }


def _check(args, config: Config) -> _Outcome:
    loaded = load_worth(args.worth)
    game = loaded.game
    if isinstance(game, CharacteristicFunctionGame):
        superadditivity = game.superadditivity()
    else:
        superadditivity = classify_superadditivity(game)
    externalities = externality_report(game)
    if externalities.positive and externalities.negative:
        sign = 'mixed'
    elif externalities.positive:
        sign = 'positive only'
    elif externalities.negative:
        sign = 'negative only'
    else:
        sign = 'none'

    def externality(witness) -> Dict[str, Any]:
        return {
            'affected': format_coalition(witness.affected),
            'merging': [format_coalition(witness.first), format_coalition(witness.second)],
            'partition': witness.partition.to_lists(),
            'before': format_rational(witness.before),
            'after': format_rational(witness.after),
        }

    report = {
        'players': game.n,
        'superadditivity': superadditivity.classification,
        'violations': [_superadditivity_witness(w) for w in superadditivity.violations],
        'equalities': [_superadditivity_witness(w) for w in superadditivity.equalities],
        'externalities': sign,
        'positive_externalities': len(externalities.positive),
        'negative_externalities': len(externalities.negative),
        'witnesses': {
            'positive': [externality(w) for w in externalities.positive[:1]],
            'negative': [externality(w) for w in externalities.negative[:1]],
        },
    }
    return _Outcome(report, superadditivity.classification != NONE)


def _implement(args, config: Config) -> _Outcome:
    worth = load_worth(args.worth).partition_game
    bar = theta_bar(worth)
    theta = auto_theta(worth) if args.theta == AUTO else parse_rational(args.theta)
    if theta <= bar:
        logger.warning(f'theta {format_rational(theta)} does not exceed the threshold {format_rational(bar)}')
    game = GammaGame(worth, theta)
    if args.out:
        save_game(args.out, game, dense=args.dense)
    return _Outcome({
        'players': game.n,
        'theta_bar': format_rational(bar),
        'theta': format_rational(theta),
        'above_threshold': theta > bar,
        'strategies': [len(s) for s in game.strategies],
        'profiles': game.num_profiles,
        'representation': DENSE if args.dense else GAMMA_LAZY,
        'out': args.out,
    })


def _verify(args, config: Config) -> _Outcome:
    game = load_game(args.game)
    worth = load_worth(args.worth).partition_game
    report = verify_implementation(game, worth, args.concept, config.epsilons, config.dense_limit)
    return _Outcome(report.to_dict(), report.verdict == PASS)


def _equilibria(args, config: Config) -> _Outcome:
    game = load_game(args.game)
    log_section(f'Solving composite games under {args.concept} (n={game.n})')
    partitions = []
    cache: Dict = {}
    for partition in enumerate_partitions(game.n):
        solutions = solve_composite(CompositeGame(game, partition), args.concept, config.epsilons, cache)
        metrics.record_partition()
        partitions.append({
            'partition': partition.to_lists(),
            'solutions': [game.profile_labels(profile) for profile in solutions.profiles],
            'payoff_unique': solutions.payoff_unique,
            'block_payoffs': format_vector(solutions.block_payoffs) if solutions.block_payoffs else None,
        })
    return _Outcome({'concept': args.concept, 'players': game.n, 'partitions': partitions})


def _market(args) -> Market:
    return Market.create(parse_rational(args.a), parse_rational(args.b), parse_costs(args.costs))


def _oracle_check(market: Market, worth, config: Config) -> Dict[str, Any]:
    """Cross-check every embedded cartel's profit against the best-response oracle."""
    worst = 0.0
    iterations = 0
    for partition in enumerate_partitions(market.n):
        outcome = cournot_oracle(market, partition, config.oracle_tol, config.oracle_max_iter)
        iterations += outcome.iterations
        for block, profit in zip(partition, outcome.profits):
            exact = float(worth.value(block, partition))
            error = abs(profit - exact) / max(1.0, abs(exact))
            worst = max(worst, error)
            if error > config.oracle_tol:
                raise OracleError(
                    f'oracle profit {profit:.12g} of {format_coalition(block)} in {partition} '
                    f'differs from {format_rational(worth.value(block, partition))}'
                )
    return {'partitions': len(enumerate_partitions(market.n)), 'iterations': iterations,
            'max_relative_error': worst}


def _market_command(model: str) -> Callable:
    builders = {COURNOT: cournot_worth, BERTRAND: bertrand_worth, MAXIMIN: maximin_worth}

    def command(args, config: Config) -> _Outcome:
        market = _market(args)
        worth = builders[model](market)
        report: Dict[str, Any] = {'model': model, 'market': market.to_dict()}
        if model == COURNOT and args.oracle:
            report['oracle'] = _oracle_check(market, worth, config)
        if isinstance(worth, CharacteristicFunctionGame):
            report['values'] = {format_coalition(c): format_rational(v) for c, v in worth.items()}
        else:
            report['values'] = [
                {'coalition': format_coalition(c), 'partition': p.to_lists(), 'value': format_rational(v)}
                for (c, p), v in worth.embedded_coalitions()
            ]
        if args.out:
            save_worth(args.out, worth, market, model)
            report['out'] = args.out
        return _Outcome(report)

    return command


def _reduced(loaded: WorthFile, gamma: bool) -> CharacteristicFunctionGame:
    if gamma:
        return gamma_characteristic(loaded.partition_game).characteristic()
    if isinstance(loaded.game, CharacteristicFunctionGame):
        return loaded.game
    return loaded.game.to_characteristic()


def _shapley(args, config: Config) -> _Outcome:
    loaded = load_worth(args.worth)
    game = _reduced(loaded, args.gamma)
    phi = shapley(game)
    return _Outcome({
        'game': 'gamma' if args.gamma else 'characteristic',
        'shapley': phi.to_list(),
        'total': format_rational(phi.total),
        'core_violations': [
            {'coalition': label, 'lhs': format_rational(lhs), 'rhs': format_rational(rhs)}
            for label, lhs, rhs in core_violations(game, phi.values, PLAIN)
        ],
    })


def _core(args, config: Config) -> _Outcome:
    loaded = load_worth(args.worth)
    game = loaded.game
    result = core_feasible(game, args.variant)
    report: Dict[str, Any] = {
        'variant': args.variant,
        'core': 'non-empty' if result.feasible else 'empty',
    }
    if result.feasible:
        report['witness'] = format_vector(result.witness)
    else:
        rows = core_system(game, args.variant).rows
        report['certificate'] = [
            {'row': row.label, 'multiplier': format_rational(y)}
            for row, y in zip(rows, result.certificate) if y != 0
        ]
    if args.variant == DELTA and not isinstance(game, CharacteristicFunctionGame):
        report['singleton_sum_test'] = delta_singleton_sum_test(game, loaded.market).to_dict()
    if args.imputation:
        y = [parse_rational(token.strip()) for token in args.imputation.split(',')]
        report['imputation'] = {
            'y': format_vector(y),
            'violations': [
                {'row': label, 'lhs': format_rational(lhs), 'rhs': format_rational(rhs)}
                for label, lhs, rhs in core_violations(game, y, args.variant)
            ],
        }
    return _Outcome(report, result.feasible)


def _convexity(args, config: Config) -> _Outcome:
    loaded = load_worth(args.worth)
    game = _reduced(loaded, args.gamma)
    result = check_convexity(game)
    report: Dict[str, Any] = {'game': 'gamma' if args.gamma else 'characteristic', **result.to_dict()}
    if args.gamma and loaded.market is not None and loaded.model == COURNOT:
        margins = sqrt_supermodularity_report(gamma_characteristic(loaded.partition_game, loaded.market))
        report['margin_report'] = {
            'pairs': len(margins.pairs),
            'failing': [pair.to_dict() for pair in margins.failing],
        }
    return _Outcome(report, result.convex)


def _gen(args, config: Config) -> _Outcome:
    seed = config.seed if config.seed is not None else 0
    game = generate_random(args.players, args.kind, seed)
    classification = classify_superadditivity(game).classification
    saved = game.to_characteristic() if args.kind == WEAK_CF else game
    if args.out:
        save_worth(args.out, saved)
    return _Outcome({
        'class': args.kind,
        'players': args.players,
        'seed': seed,
        'superadditivity': classification,
        'out': args.out,
    })


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='coop2nf',
        allow_abbrev=False,
        description='Implement cooperative worth games as normal-form games and analyse oligopoly markets.',
    )
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    parser.add_argument('--json', action='store_true', help='emit reports as JSON')
    parser.add_argument('--log-level', choices=LOG_LEVELS, type=str.upper, default='WARNING')
    parser.add_argument('--dense-limit', type=int, default=None,
                        help='largest player count verified by full profile scans (default: 4)')
    parser.add_argument('--epsilons', default=None, help='tremble sizes, e.g. "1/100,1/1000"')
    parser.add_argument('--oracle-tol', type=float, default=None)
    parser.add_argument('--oracle-max-iter', type=int, default=None)
    subparsers = parser.add_subparsers(dest='verb', required=True)

    check = subparsers.add_parser('check', help='superadditivity class and externalities')
    check.add_argument('worth')
    check.set_defaults(handler=_check)

    implement = subparsers.add_parser('implement', help='build the normal-form game of a worth game')
    implement.add_argument('worth')
    implement.add_argument('--theta', default=AUTO, help='"auto" (threshold + 1) or a positive rational')
    implement.add_argument('--out')
    implement.add_argument('--dense', action='store_true', help='write the full payoff table')
    implement.set_defaults(handler=_implement)

    verify = subparsers.add_parser('verify', help='check that composite-game solutions reproduce the worth')
    verify.add_argument('game')
    verify.add_argument('worth')
    verify.add_argument('--concept', choices=CONCEPTS, default=NASH)
    verify.set_defaults(handler=_verify)

    equilibria = subparsers.add_parser('equilibria', help='solutions of every composite game')
    equilibria.add_argument('game')
    equilibria.add_argument('--concept', choices=CONCEPTS, default=NASH)
    equilibria.set_defaults(handler=_equilibria)

    for model in (COURNOT, BERTRAND, MAXIMIN):
        market = subparsers.add_parser(model, help=f'{model} worth of a linear-demand market')
        market.add_argument('--a', required=True, help='demand intercept')
        market.add_argument('--b', required=True, help='demand slope')
        market.add_argument('--costs', required=True, help='increasing marginal costs, e.g. "10,20,30"')
        market.add_argument('--out')
        if model == COURNOT:
            market.add_argument('--oracle', action='store_true', help='cross-check with best-response iteration')
        market.set_defaults(handler=_market_command(model))

    shapley_parser = subparsers.add_parser('shapley', help='Shapley value')
    shapley_parser.add_argument('worth')
    shapley_parser.add_argument('--gamma', action='store_true', help='use the gamma characteristic function')
    shapley_parser.set_defaults(handler=_shapley)

    core = subparsers.add_parser('core', help='core non-emptiness')
    core.add_argument('worth')
    core.add_argument('--variant', choices=CORE_VARIANTS, default=PLAIN)
    core.add_argument('--imputation', help='also check this payoff vector, e.g. "1200,500,325"')
    core.set_defaults(handler=_core)

    convexity = subparsers.add_parser('convexity', help='convexity (supermodularity)')
    convexity.add_argument('worth')
    convexity.add_argument('--gamma', action='store_true', help='use the gamma characteristic function')
    convexity.set_defaults(handler=_convexity)

    gen = subparsers.add_parser('gen', help='seeded random worth game')
    gen.add_argument('--class', dest='kind', choices=RANDOM_KINDS, required=True)
    gen.add_argument('--players', type=int, required=True)
    gen.add_argument('--seed', type=int, default=None)
    gen.add_argument('--out')
    gen.set_defaults(handler=_gen)

    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse ``argv``, run one command and return its exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    try:
        config = load_config(args)
    except ConfigError as e:
        print('Configuration errors:', file=sys.stderr)
        for error in e.errors:
            print(f'  - {error}', file=sys.stderr)
        return EXIT_USAGE

    setup_logger(level=config.log_level)
    metrics.reset()
    start_time = metrics.record_run_start()
    try:
        outcome = args.handler(args, config)
    except InputError as e:
        logger.error(str(e))
        return EXIT_USAGE
    except Coop2nfError as e:
        logger.error(f'{type(e).__name__}: {e}')
        emit({'verb': args.verb, 'error': type(e).__name__, 'message': str(e)}, config.json_output)
        return EXIT_NEGATIVE
    finally:
        metrics.record_run_end(start_time)
        logger.info(metrics.summary())

    emit(outcome.report, config.json_output)
    return EXIT_OK if outcome.ok else EXIT_NEGATIVE


def main(argv: Optional[List[str]] = None) -> None:
    sys.exit(run(argv))
