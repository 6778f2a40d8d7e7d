"""
The tag-announcement normal form Gamma(N, v, theta) of a cooperative game.

Each player i announces a coalition S containing i (strategy sigma_i^S). A
player is attributed the coalition it announced when every member of that
coalition announced it too. Payoffs combine a coordination term f, scaled by
theta, with a worth term g that pays out v only once every player is
attributed a coalition.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

from .combinatorics import (
    Coalition,
    Partition,
    all_coalitions,
    coalitions_containing,
    enumerate_partitions,
    grand_coalition,
    members,
    size,
)
from .errors import InputError, InvariantViolation
from .logger import logger, log_section, log_subsection
from .metrics import metrics
from .normal_form import GAMMA_LAZY, CompositeGame, NormalFormGame, PayoffVector, Profile, StrategyLabel, rho_partition
from .solvers import (
    DEFAULT_EPSILONS,
    NASH,
    STRICT,
    CONCEPTS,
    DominanceCache,
    SolutionSet,
    build_dominance_registry,
    find_dominant,
    solve_composite,
)
from .utils import format_coalition, format_rational, format_vector
from .worth import STRICT as STRICT_WORTH, PartitionFunctionGame, classify_superadditivity

MAX_VERIFY_PLAYERS = 5

PASS = 'pass'
FAIL = 'fail'
INDETERMINATE = 'indeterminate'


def gamma_components(worth: PartitionFunctionGame, tags: Sequence[Coalition]) -> Tuple[List[int], List[Fraction]]:
    """
    (f, g) at the profile where player i announces ``tags[i]``.

    f_i = -n when i is unattributed, else n - kappa; g_i = v(rho(i), {rho(j)}) / |rho(i)|
    once all n players are attributed, else |rho(i)| (0 when unattributed).
    """
    attributed = [
        tag if all(tags[j] == tag for j in members(tag)) else 0
        for tag in tags
    ]
    return _components(worth, attributed)


def _components(worth: PartitionFunctionGame, attributed: Sequence[Coalition]) -> Tuple[List[int], List[Fraction]]:
    n = worth.n
    count = sum(1 for coalition in attributed if coalition)
    f = [n - count if coalition else -n for coalition in attributed]
    if count == n:
        partition = Partition.from_blocks(n, set(attributed))
        g = [worth.value(coalition, partition) / size(coalition) for coalition in attributed]
    else:
        g = [Fraction(size(coalition)) for coalition in attributed]
    return f, g


def gamma_payoff(worth: PartitionFunctionGame, theta, tags: Sequence[Coalition]) -> PayoffVector:
    """u_i = theta * f_i + g_i for every player."""
    if len(tags) != worth.n:
        raise InputError(f'profile has {len(tags)} announcements, game has {worth.n} players')
    for player, tag in enumerate(tags):
        if not tag >> player & 1:
            raise InputError(f'player {player + 1} announced {format_coalition(tag)}, which excludes them')
    theta = Fraction(theta)
    f, g = gamma_components(worth, tags)
    return tuple(theta * fi + gi for fi, gi in zip(f, g))


class GammaGame(NormalFormGame):
    """Lazily evaluated Gamma(N, v, theta); X_i lists the tags containing i by ascending mask."""

    representation = GAMMA_LAZY

    def __init__(self, worth: PartitionFunctionGame, theta, cache: Optional[bool] = None):
        theta = Fraction(theta)
        if theta <= 0:
            raise InputError(f'theta must be positive, got {format_rational(theta)}')
        n = worth.n
        strategies = [[StrategyLabel(i, tag) for tag in coalitions_containing(n, i)] for i in range(n)]
        super().__init__(strategies, cache=n <= 4 if cache is None else cache)
        self.worth = worth
        self.theta = theta
        self.set_registry({
            coalition: tuple(self.index_of(j, StrategyLabel(j, coalition)) for j in members(coalition))
            for coalition in all_coalitions(n)
        })

    def tags(self, profile: Profile) -> List[Coalition]:
        """The coalition each player announces in ``profile``."""
        return [self.strategies[i][index].tag for i, index in enumerate(profile)]

    def profile_of(self, tags: Sequence[Coalition]) -> Profile:
        """Inverse of ``tags``."""
        return tuple(self.index_of(i, StrategyLabel(i, tag)) for i, tag in enumerate(tags))

    def components(self, profile: Profile) -> Tuple[List[int], List[Fraction]]:
        return gamma_components(self.worth, self.tags(profile))

    def _evaluate(self, profile: Profile) -> PayoffVector:
        f, g = self.components(profile)
        return tuple(self.theta * fi + gi for fi, gi in zip(f, g))


Pattern = Tuple[Coalition, ...]
"""Attributed coalitions of a profile, disjoint, ascending by mask."""


def attribution_patterns(n: int) -> Iterator[Pattern]:
    """
    Every family of disjoint coalitions that is exactly the attributed set of some profile.

    Players outside the family must be unattributed: one such player announces
    a pair with an attributed player, several announce N (or, when nobody is
    attributed, a cycle of pairs, which needs three players).
    """
    grand = grand_coalition(n)

    def extend(free: Coalition, chosen: Pattern) -> Iterator[Pattern]:
        if not free:
            yield tuple(sorted(chosen))
            return
        low = free & -free
        yield from extend(free & ~low, chosen)
        rest = free & ~low
        subset = rest
        while True:
            yield from extend(rest & ~subset, chosen + (low | subset,))
            if not subset:
                break
            subset = (subset - 1) & rest

    for pattern in extend(grand, ()):
        if pattern or n >= 3:
            yield pattern


def _pattern_components(worth: PartitionFunctionGame, pattern: Pattern) -> Tuple[List[int], List[Fraction]]:
    """(f, g) shared by every profile whose attributed coalitions are ``pattern``."""
    n = worth.n
    attributed = [0] * n
    for block in pattern:
        for player in members(block):
            attributed[player] = block
    return _components(worth, attributed)


def _starred(pattern: Pattern, coalition: Coalition) -> Pattern:
    """Pattern after ``coalition`` switches to announcing itself: blocks it cuts are lost."""
    return tuple(sorted([block for block in pattern if not block & coalition] + [coalition]))


def _tag_comparisons(worth: PartitionFunctionGame) -> Iterator[Tuple[Coalition, Pattern, int, Fraction]]:
    """
    (S, pattern, f_S* - f_S, g_S* - g_S) for every S and every pattern in which S is not attributed.

    These cover every profile where S does not announce itself, so tag
    dominance and the threshold follow from them without a profile scan.
    """
    n = worth.n
    patterns = list(attribution_patterns(n))
    components = {pattern: _pattern_components(worth, pattern) for pattern in patterns}
    for coalition in all_coalitions(n):
        group = members(coalition)
        for pattern in patterns:
            if coalition in pattern:
                continue
            starred = _starred(pattern, coalition)
            if starred not in components:
                components[starred] = _pattern_components(worth, starred)
            f, g = components[pattern]
            f_star, g_star = components[starred]
            gap = sum(f_star[j] for j in group) - sum(f[j] for j in group)
            _check_f_gap(n, coalition, f, f_star, gap, f'pattern {[format_coalition(b) for b in pattern]}')
            yield coalition, pattern, gap, sum(g_star[j] for j in group) - sum(g[j] for j in group)


def theta_bar(worth: PartitionFunctionGame) -> Fraction:
    """
    Threshold above which every coalition's tag announcement strictly dominates.

    For every coalition S, every joint announcement of S other than all-S and
    every announcement of the outsiders with a different f_S, the ratio
    (g_S - g_S*) / (f_S* - f_S) is a lower bound on theta. The maximum is
    clamped at 0. Profiles are grouped by their attributed coalitions, which
    fix f and g.
    """
    if worth.n < 2:
        return Fraction(0)
    best = max((-g_gap / f_gap for _, _, f_gap, g_gap in _tag_comparisons(worth) if f_gap), default=Fraction(0))
    result = max(best, Fraction(0))
    logger.info(f'theta_bar = {format_rational(result)}')
    return result


def theta_bar_by_profiles(worth: PartitionFunctionGame) -> Fraction:
    """``theta_bar`` by an exhaustive profile scan; only practical up to four players."""
    n = worth.n
    if n < 2:
        return Fraction(0)
    game = GammaGame(worth, 1, cache=False)
    components: Dict[Profile, Tuple[List[int], List[Fraction]]] = {}

    def at(profile: Profile) -> Tuple[List[int], List[Fraction]]:
        if profile not in components:
            components[profile] = game.components(profile)
        return components[profile]

    best = Fraction(0)
    for coalition in all_coalitions(n):
        group = members(coalition)
        star = {j: game.index_of(j, StrategyLabel(j, coalition)) for j in group}
        for profile in game.profiles():
            if all(profile[j] == star[j] for j in group):
                continue
            starred = tuple(star.get(j, index) for j, index in enumerate(profile))
            f, g = at(profile)
            f_star, g_star = at(starred)
            gap = sum(f_star[j] for j in group) - sum(f[j] for j in group)
            _check_f_gap(n, coalition, f, f_star, gap, str(game.profile_labels(profile)))
            if gap:
                best = max(best, (sum(g[j] for j in group) - sum(g_star[j] for j in group)) / gap)
    return best


def tag_dominance_margins(worth: PartitionFunctionGame, theta) -> Dict[Coalition, Fraction]:
    """
    Worst-case u_S(tag) - u_S(alternative) per coalition S at ``theta``.

    Positive means the tag joint announcement strictly dominates; zero means weakly.
    """
    theta = Fraction(theta)
    margins: Dict[Coalition, Fraction] = {}
    for coalition, _, f_gap, g_gap in _tag_comparisons(worth):
        margin = theta * f_gap + g_gap
        if coalition not in margins or margin < margins[coalition]:
            margins[coalition] = margin
    return margins


def _check_f_gap(n: int, coalition: Coalition, f: Sequence[int], f_star: Sequence[int], gap: int,
                 where: str) -> None:
    """f_S* - f_S >= (|S| - m)(2n - k - m) >= 0 with k = kappa(starred, N), m = kappa(profile, S)."""
    # attributed players have f = n - kappa >= 0, unattributed ones f = -n
    k = sum(1 for value in f_star if value != -n)
    m = sum(1 for j in members(coalition) if f[j] != -n)
    bound = (size(coalition) - m) * (2 * n - k - m)
    if gap < bound or gap < 0:
        raise InvariantViolation(f'f gap {gap} below {bound} for {format_coalition(coalition)} at {where}')


def auto_theta(worth: PartitionFunctionGame) -> Fraction:
    """theta_bar + 1."""
    return theta_bar(worth) + 1


def example_one_bound(a) -> Fraction:
    """max(a/2 - 1, 1 - a): the closed-form threshold of the zero-normalized two-player game."""
    a = Fraction(a)
    return max(a / 2 - 1, 1 - a)


def example_two_bound(a, b, c, d, e, f, g) -> Fraction:
    """Closed-form threshold of the zero-normalized three-player game (see ``example_two_game``)."""
    a, b, c, d, e, f, g = (Fraction(x) for x in (a, b, c, d, e, f, g))
    return max(
        Fraction(1), a / 2 - 1, c / 2 - 1, e / 2 - 1, -b / 3, -d / 3, -f / 3, (g - 3) / 6,
        (1 - a) / 2, (1 - c) / 2, (1 - e) / 2,
        (a + 2 * b - 8) / 4, (c + 2 * d - 8) / 4, (e + 2 * f - 8) / 4, 4 - g,
    )


@dataclass
class DominanceWitness:
    """An alternative announcement of ``coalition`` doing at least as well as the tag one."""
    coalition: Coalition
    alternative: List[str]
    opposing: List[str]
    tag_payoff: Fraction
    alternative_payoff: Fraction

    def to_dict(self) -> Dict[str, Any]:
        return {
            'coalition': format_coalition(self.coalition),
            'alternative': self.alternative,
            'opposing': self.opposing,
            'tag_payoff': format_rational(self.tag_payoff),
            'alternative_payoff': format_rational(self.alternative_payoff),
        }


def tag_dominance_witnesses(game: GammaGame, mode: str = STRICT) -> List[DominanceWitness]:
    """
    First witness, per coalition, against the tag joint announcement being dominant.

    strict mode flags alternatives doing at least as well; weak mode flags
    alternatives doing strictly better.
    """
    witnesses = []
    for coalition in all_coalitions(game.n):
        group = members(coalition)
        star = {j: game.index_of(j, StrategyLabel(j, coalition)) for j in group}
        for profile in game.profiles():
            if all(profile[j] == star[j] for j in group):
                continue
            starred = tuple(star.get(j, index) for j, index in enumerate(profile))
            tag_value = game.coalition_payoff(coalition, starred)
            value = game.coalition_payoff(coalition, profile)
            if value > tag_value or (mode == STRICT and value == tag_value):
                witnesses.append(DominanceWitness(
                    coalition,
                    [game.profile_labels(profile)[j] for j in group],
                    [label for j, label in enumerate(game.profile_labels(profile)) if j not in star],
                    tag_value, value,
                ))
                break
    return witnesses


@dataclass
class CoalitionCheck:
    """u_S at the solution against v(S, pi)."""
    coalition: Coalition
    payoff: Fraction
    worth: Fraction

    @property
    def matched(self) -> bool:
        return self.payoff == self.worth


@dataclass
class PartitionResult:
    """Verification of one composite game."""
    partition: Partition
    solutions: SolutionSet
    labels: List[List[str]]
    checks: List[CoalitionCheck] = field(default_factory=list)
    status: str = PASS
    reason: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            'partition': self.partition.to_lists(),
            'status': self.status,
            'reason': self.reason,
            'solutions': self.labels,
            'multiplicity': len(self.solutions.profiles),
            'payoff_unique': self.solutions.payoff_unique,
            'coalitions': [
                {
                    'coalition': format_coalition(check.coalition),
                    'payoff': format_rational(check.payoff),
                    'worth': format_rational(check.worth),
                    'matched': check.matched,
                }
                for check in self.checks
            ],
        }


@dataclass
class ImplementationReport:
    """Whether the composite-game solutions reproduce every embedded coalition's worth."""
    concept: str
    partitions: List[PartitionResult] = field(default_factory=list)
    verdict: str = PASS
    bijection: Optional[bool] = None
    witnesses: List[Dict[str, Any]] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'concept': self.concept,
            'verdict': self.verdict,
            'bijection': self.bijection,
            'partitions': [result.to_dict() for result in self.partitions],
            'witnesses': self.witnesses,
        }


def _dominant_solution(cg: CompositeGame, concept: str, cache: DominanceCache) -> Optional[SolutionSet]:
    """The unique solution when every block has a strictly dominant joint strategy."""
    joints = {}
    for coalition in cg.blocks:
        dominant = find_dominant(cg, coalition, STRICT, cache)
        if dominant is None:
            return None
        joints[coalition] = dominant.strategies
    first = cg.blocks[0]
    profile = cg.assemble(first, joints[first], tuple(joints[block] for block in cg.others(first)))
    return SolutionSet.from_profiles(concept, cg, [profile])


def _tag_solution(game: GammaGame, cg: CompositeGame, concept: str,
                  margins: Dict[Coalition, Fraction]) -> Optional[SolutionSet]:
    """The tag profile when every block's tag announcement strictly dominates (positive margin)."""
    if not all(margins[block] > 0 for block in cg.blocks):
        return None
    profile = game.profile_of([cg.partition.block_of(player) for player in range(game.n)])
    return SolutionSet.from_profiles(concept, cg, [profile])


def verify_implementation(game: NormalFormGame, worth: PartitionFunctionGame, concept: str = NASH,
                          epsilons: Sequence[Fraction] = DEFAULT_EPSILONS,
                          dense_limit: int = 4) -> ImplementationReport:
    """
    Solve every composite game of ``game`` and compare block payoffs with v(S, pi).

    Games above ``dense_limit`` players are first solved through per-coalition
    strict dominance (read off ``tag_dominance_margins`` for the construction),
    falling back to the full scan when a block lacks a dominant joint strategy.
    For strictly superadditive worth under Nash the map from equilibria to
    attributed coalitions must also be a bijection onto the partitions.
    """
    if concept not in CONCEPTS:
        raise InputError(f'unknown solution concept "{concept}", expected one of {", ".join(CONCEPTS)}')
    if game.n != worth.n:
        raise InputError(f'game has {game.n} players, worth has {worth.n}')
    if game.n > MAX_VERIFY_PLAYERS:
        raise InputError(f'verification supports at most {MAX_VERIFY_PLAYERS} players, got {game.n}')

    report = ImplementationReport(concept)
    cache: DominanceCache = {}
    lazy = game.n > dense_limit
    margins = tag_dominance_margins(game.worth, game.theta) if lazy and isinstance(game, GammaGame) else None
    log_section(f'Verifying {game.representation} game under {concept} (n={game.n})')

    for partition in enumerate_partitions(game.n):
        log_subsection(f'Composite game {partition}')
        cg = CompositeGame(game, partition)
        solutions = None
        if margins is not None:
            solutions = _tag_solution(game, cg, concept, margins)
        elif lazy:
            solutions = _dominant_solution(cg, concept, cache)
        if solutions is None:
            solutions = solve_composite(cg, concept, epsilons, cache)
        metrics.record_partition()
        result = PartitionResult(partition, solutions, [game.profile_labels(p) for p in solutions.profiles])
        report.partitions.append(result)

        if not solutions.profiles:
            result.status = FAIL
            result.reason = solutions.failure or f'no {concept} solution'
        elif not solutions.payoff_unique:
            result.status = INDETERMINATE
            result.reason = f'{len(solutions.profiles)} solutions with different coalition payoffs'
        else:
            for coalition, payoff in zip(partition.blocks, solutions.block_payoffs):
                result.checks.append(CoalitionCheck(coalition, payoff, worth.value(coalition, partition)))
            if not all(check.matched for check in result.checks):
                result.status = FAIL
                result.reason = 'coalition payoff differs from worth'
        if result.status != PASS:
            logger.warning(f'{partition}: {result.status} ({result.reason})')
            report.witnesses.append({'partition': partition.to_lists(), 'status': result.status,
                                     'reason': result.reason, 'solutions': result.labels})

    if concept == NASH and classify_superadditivity(worth).classification == STRICT_WORTH:
        report.bijection = _check_bijection(game, report)
        if not report.bijection:
            report.witnesses.append({'bijection': False})

    statuses = {result.status for result in report.partitions}
    if FAIL in statuses or report.bijection is False:
        report.verdict = FAIL
    elif INDETERMINATE in statuses:
        report.verdict = INDETERMINATE
    logger.info(f'verdict: {report.verdict}')
    return report


def _check_bijection(game: NormalFormGame, report: ImplementationReport) -> bool:
    """Each partition has exactly one equilibrium and its attributed coalitions rebuild that partition."""
    if game.registry is None:
        build_dominance_registry(game)
    for result in report.partitions:
        if len(result.solutions.profiles) != 1:
            logger.warning(f'{result.partition}: {len(result.solutions.profiles)} equilibria, expected one')
            return False
        rebuilt = rho_partition(game, result.solutions.profiles[0])
        if rebuilt != result.partition:
            logger.warning(f'{result.partition}: equilibrium attributes {rebuilt}')
            return False
    return True


def payoff_row(game: NormalFormGame, profile: Profile) -> List[str]:
    """Rational strings of the payoff vector at ``profile``."""
    return format_vector(game.payoff(profile))
