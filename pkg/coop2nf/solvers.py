"""
Solution concepts on composite games.

Every scan works at coalition granularity: a block S of the partition picks a
joint strategy from X_S while the other blocks' joint strategies form the
opposing profile.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .combinatorics import Coalition, all_coalitions, members, singletons_and
from .errors import InputError, InvariantViolation
from .logger import logger
from .normal_form import CompositeGame, Joint, NormalFormGame, Profile, label_text
from .numerics import LinearSystem, lp_feasible
from .utils import format_coalition, format_rational

NASH = 'nash'
RATIONALIZABILITY = 'rationalizability'
THP = 'thp'
CONCEPTS = (NASH, RATIONALIZABILITY, THP)

STRICT = 'strict'
WEAK = 'weak'

DEFAULT_EPSILONS = (Fraction(1, 100), Fraction(1, 1000))

DominanceCache = Dict[Tuple[Coalition, str], Optional['JointStrategy']]


@dataclass(frozen=True)
class JointStrategy:
    """sigma_S: one strategy index per member of ``coalition``, ascending by player."""
    coalition: Coalition
    strategies: Joint

    def labels(self, game: NormalFormGame) -> List[str]:
        """Member labels, e.g. ``["1:{1,2}", "2:{1,2}"]``."""
        return [str(game.strategies[player][index])
                for player, index in zip(members(self.coalition), self.strategies)]


@dataclass
class SolutionSet:
    """
    Solutions of one composite game under ``concept``.

    ``payoff_unique`` is true iff there is at least one solution and all of them
    give identical per-block payoffs.
    """
    concept: str
    profiles: List[Profile]
    payoff_unique: bool
    block_payoffs: Optional[Tuple[Fraction, ...]] = None
    failure: Optional[str] = None

    @classmethod
    def from_profiles(cls, concept: str, cg: CompositeGame, profiles: Sequence[Profile],
                      failure: Optional[str] = None) -> 'SolutionSet':
        """Sort profiles canonically and evaluate payoff uniqueness; ``failure`` explains an empty set."""
        profiles = sorted(set(profiles))
        outcomes = {cg.block_payoffs(profile) for profile in profiles}
        unique = len(outcomes) == 1
        return cls(concept, profiles, unique, next(iter(outcomes)) if unique else None, failure)


def _payoff_table(cg: CompositeGame, coalition: Coalition, joints: Sequence[Joint],
                  opposing: Sequence[Tuple[Joint, ...]]) -> Dict[Joint, List[Fraction]]:
    """u_S for every (joint strategy, opposing profile), rows by joint strategy."""
    return {
        joint: [cg.payoff(coalition, cg.assemble(coalition, joint, other)) for other in opposing]
        for joint in joints
    }


def pure_nash(cg: CompositeGame) -> SolutionSet:
    """
    Every profile at which no block has a strictly profitable joint deviation.

    Each block's best replies are collected per opposing profile; the equilibria
    are the profiles that are a best reply for every block.
    """
    best_replies: Dict[Coalition, set] = {}
    for coalition in cg.blocks:
        joints = cg.joint_strategies(coalition)
        replies = set()
        for other in cg.opposing(coalition):
            profiles = [cg.assemble(coalition, joint, other) for joint in joints]
            values = [cg.payoff(coalition, profile) for profile in profiles]
            top = max(values)
            replies.update(profile for profile, value in zip(profiles, values) if value == top)
        best_replies[coalition] = replies

    first, *rest = cg.blocks
    equilibria = [
        profile for profile in best_replies[first]
        if all(profile in best_replies[coalition] for coalition in rest)
    ]
    logger.debug(f'{cg.partition}: {len(equilibria)} pure Nash equilibria')
    return SolutionSet.from_profiles(NASH, cg, equilibria)


def find_dominant(cg: CompositeGame, coalition: Coalition, mode: str = STRICT,
                  cache: Optional[DominanceCache] = None) -> Optional[JointStrategy]:
    """
    Dominant joint strategy of block ``coalition`` or None.

    strict: the unique best reply to every opposing profile. weak: a best reply
    to every opposing profile (lowest index among payoff-identical duplicates).
    The answer depends on the coalition only, so ``cache`` may be shared across
    partitions of the same game.
    """
    if mode not in (STRICT, WEAK):
        raise InputError(f'unknown dominance mode "{mode}"')
    if cache is not None and (coalition, mode) in cache:
        return cache[(coalition, mode)]

    joints = cg.joint_strategies(coalition)
    candidates = set(range(len(joints)))
    for other in cg.opposing(coalition):
        values = [cg.payoff(coalition, cg.assemble(coalition, joint, other)) for joint in joints]
        top = max(values)
        best = {k for k, value in enumerate(values) if value == top}
        if mode == STRICT and len(best) > 1:
            candidates = set()
        else:
            candidates &= best
        if not candidates:
            break

    result = JointStrategy(coalition, joints[min(candidates)]) if candidates else None
    if cache is not None:
        cache[(coalition, mode)] = result
    return result


def build_dominance_registry(game: NormalFormGame, mode: str = STRICT) -> Dict[Coalition, Joint]:
    """
    Find each coalition's dominant joint strategy and install the result on ``game``.

    Coalitions without one are left out; rho then never attributes them.
    """
    registry: Dict[Coalition, Joint] = {}
    for coalition in all_coalitions(game.n):
        cg = CompositeGame(game, singletons_and(coalition, game.n))
        dominant = find_dominant(cg, coalition, mode)
        if dominant is not None:
            registry[coalition] = dominant.strategies
    logger.debug(f'dominance registry covers {len(registry)} of {len(all_coalitions(game.n))} coalitions')
    game.set_registry(registry)
    return registry


@dataclass
class Elimination:
    """One removed joint strategy and what removed it."""
    coalition: Coalition
    joint: Joint
    method: str
    dominator: Dict[Joint, Fraction]


@dataclass
class EliminationResult:
    """Survivors of iterated strict dominance per block."""
    cg: CompositeGame
    survivors: Dict[Coalition, List[Joint]]
    eliminated: List[Elimination] = field(default_factory=list)

    def profiles(self) -> List[Profile]:
        """Every profile built from surviving joint strategies."""
        first = self.cg.blocks[0]
        return [
            self.cg.assemble(first, joint, other)
            for joint in self.survivors[first]
            for other in self.cg.opposing(first, self.survivors)
        ]

    def solution_set(self) -> SolutionSet:
        return SolutionSet.from_profiles(RATIONALIZABILITY, self.cg, self.profiles())


def _common_best(table: Dict[Joint, List[Fraction]], joints: Sequence[Joint], width: int) -> Optional[Joint]:
    """The joint strategy that is the unique maximum in every column, if any."""
    winner = None
    for k in range(width):
        column = [table[joint][k] for joint in joints]
        top = max(column)
        best = [joint for joint, value in zip(joints, column) if value == top]
        if len(best) != 1 or (winner is not None and best[0] != winner):
            return None
        winner = best[0]
    return winner


def _pure_dominator(table: Dict[Joint, List[Fraction]], target: Joint,
                    remaining: Sequence[Joint]) -> Optional[Joint]:
    row = table[target]
    total = sum(row)
    for joint in remaining:
        other = table[joint]
        if joint != target and sum(other) > total and all(a > b for a, b in zip(other, row)):
            return joint
    return None


def _mixed_dominator(table: Dict[Joint, List[Fraction]], target: Joint,
                     remaining: Sequence[Joint]) -> Optional[Dict[Joint, Fraction]]:
    """
    Mixture over ``remaining`` strictly better than ``target`` against every column.

    Feasibility of q >= 0 with sum_s q_s (u(s, o) - u(target, o)) >= 1 for all o;
    the normalized witness is the mixture.
    """
    others = [joint for joint in remaining if joint != target]
    if not others:
        return None
    system = LinearSystem(len(others), nonnegative=True)
    seen = set()
    for k in range(len(table[target])):
        row = tuple(table[joint][k] - table[target][k] for joint in others)
        if row not in seen:
            seen.add(row)
            system.add(row, 1)
    result = lp_feasible(system)
    if not result.feasible:
        return None
    total = sum(result.witness)
    return {joint: weight / total for joint, weight in zip(others, result.witness) if weight}


def _eliminate(cg: CompositeGame, reverse: bool) -> EliminationResult:
    survivors = {coalition: cg.joint_strategies(coalition) for coalition in cg.blocks}
    result = EliminationResult(cg, survivors)
    order = list(reversed(cg.blocks)) if reverse else list(cg.blocks)

    while True:
        removed = False
        tables = {}
        for coalition in order:
            joints = survivors[coalition]
            if len(joints) < 2:
                continue
            opposing = cg.opposing(coalition, survivors)
            table = _payoff_table(cg, coalition, joints, opposing)
            tables[coalition] = table
            winner = _common_best(table, joints, len(opposing))
            if winner is not None:
                for joint in joints:
                    if joint != winner:
                        result.eliminated.append(Elimination(coalition, joint, 'pure', {winner: Fraction(1)}))
                survivors[coalition] = [winner]
                removed = True
                continue
            for joint in sorted(joints, reverse=reverse):
                remaining = survivors[coalition]
                dominator = _pure_dominator(table, joint, remaining)
                if dominator is not None:
                    result.eliminated.append(Elimination(coalition, joint, 'pure', {dominator: Fraction(1)}))
                    survivors[coalition] = [j for j in remaining if j != joint]
                    removed = True
        if removed:
            continue

        for coalition in order:
            joints = survivors[coalition]
            if len(joints) < 2:
                continue
            table = tables[coalition]
            for joint in sorted(joints, reverse=reverse):
                mixture = _mixed_dominator(table, joint, joints)
                if mixture is not None:
                    result.eliminated.append(Elimination(coalition, joint, 'mixed', mixture))
                    survivors[coalition] = [j for j in joints if j != joint]
                    removed = True
                    break
            if removed:
                break
        if not removed:
            return result


def iesds(cg: CompositeGame) -> EliminationResult:
    """
    Iterated elimination of strictly dominated joint strategies.

    Pure domination is tried first; only when a full pass removes nothing is
    domination by mixtures tested through exact LP feasibility. The fixpoint
    is computed in two elimination orders and the survivor sets must agree.
    """
    forward = _eliminate(cg, reverse=False)
    backward = _eliminate(cg, reverse=True)
    for coalition in cg.blocks:
        if set(forward.survivors[coalition]) != set(backward.survivors[coalition]):
            raise InvariantViolation(
                f'elimination order changed the survivors of {list(members(coalition))} in {cg.partition}'
            )
    logger.debug(
        f'{cg.partition}: {len(forward.eliminated)} eliminations, survivors '
        f'{[len(forward.survivors[c]) for c in cg.blocks]}'
    )
    return forward


def rationalizable(cg: CompositeGame) -> SolutionSet:
    """Profiles surviving iterated strict dominance."""
    return iesds(cg).solution_set()


@dataclass
class EpsilonCheck:
    """Whether the candidate stays the unique best reply against epsilon trembles."""
    epsilon: Fraction
    passed: bool
    coalition: Optional[Coalition] = None
    """First block whose candidate lost, when the check failed."""


@dataclass
class ThpCertificate:
    """Structural trembling-hand certificate for one composite game."""
    certified: bool
    profile: Optional[Profile] = None
    epsilon_checks: List[EpsilonCheck] = field(default_factory=list)
    failure: Optional[str] = None

    def solution_set(self, cg: CompositeGame) -> SolutionSet:
        if self.certified:
            return SolutionSet.from_profiles(THP, cg, [self.profile])
        return SolutionSet.from_profiles(THP, cg, [], self.failure)


def _joint_labels(cg: CompositeGame, coalition: Coalition, joint: Joint) -> str:
    return '(' + ', '.join(
        label_text(cg.base.label(player, index)) for player, index in zip(members(coalition), joint)
    ) + ')'


def _tremble_weights(cg: CompositeGame, coalition: Coalition, opposing: Sequence[Tuple[Joint, ...]],
                     star: Dict[Coalition, Joint], epsilon: Fraction) -> List[Fraction]:
    """Probability of each opposing profile when every other block trembles uniformly."""
    others = cg.others(coalition)
    sizes = {block: len(cg.joint_strategies(block)) for block in others}
    weights = []
    for other in opposing:
        weight = Fraction(1)
        for block, joint in zip(others, other):
            p = epsilon / sizes[block]
            if joint == star[block]:
                p += 1 - epsilon
            weight *= p
        weights.append(weight)
    return weights


def thp_certify(cg: CompositeGame, epsilons: Sequence[Fraction] = DEFAULT_EPSILONS,
                cache: Optional[DominanceCache] = None) -> ThpCertificate:
    """
    Certify the weakly dominant profile as the trembling-hand perfect solution.

    Every block needs a weakly dominant joint strategy that is strictly better
    than each alternative against at least one opposing profile; it is then the
    unique best reply to any fully mixed opposing profile. The epsilon checks
    confirm this in exact arithmetic against uniform trembles of size epsilon.
    """
    star: Dict[Coalition, Joint] = {}
    for coalition in cg.blocks:
        dominant = find_dominant(cg, coalition, WEAK, cache)
        if dominant is None:
            return ThpCertificate(
                False, failure=f'coalition {format_coalition(coalition)} has no weakly dominant joint strategy',
            )
        star[coalition] = dominant.strategies

    tables = {}
    for coalition in cg.blocks:
        opposing = cg.opposing(coalition)
        table = _payoff_table(cg, coalition, cg.joint_strategies(coalition), opposing)
        best = table[star[coalition]]
        for joint, row in table.items():
            if joint != star[coalition] and not any(a > b for a, b in zip(best, row)):
                return ThpCertificate(
                    False,
                    failure=(f'coalition {format_coalition(coalition)}: alternative '
                             f'{_joint_labels(cg, coalition, joint)} is never strictly worse than '
                             f'{_joint_labels(cg, coalition, star[coalition])}'),
                )
        tables[coalition] = (opposing, table)

    first = cg.blocks[0]
    profile = cg.assemble(first, star[first], tuple(star[block] for block in cg.others(first)))
    checks = []
    for epsilon in epsilons:
        loser = None
        for coalition in cg.blocks:
            opposing, table = tables[coalition]
            weights = _tremble_weights(cg, coalition, opposing, star, Fraction(epsilon))
            expected = {
                joint: sum((w * u for w, u in zip(weights, row)), Fraction(0))
                for joint, row in table.items()
            }
            target = expected[star[coalition]]
            if any(value >= target for joint, value in expected.items() if joint != star[coalition]):
                loser = coalition
                break
        checks.append(EpsilonCheck(Fraction(epsilon), loser is None, loser))

    failed = next((check for check in checks if not check.passed), None)
    if failed is None:
        return ThpCertificate(True, profile, checks)
    return ThpCertificate(
        False, profile, checks,
        f'coalition {format_coalition(failed.coalition)}: '
        f'{_joint_labels(cg, failed.coalition, star[failed.coalition])} is not the unique best reply '
        f'against trembles of size {format_rational(failed.epsilon)}',
    )


def solve_composite(cg: CompositeGame, concept: str, epsilons: Sequence[Fraction] = DEFAULT_EPSILONS,
                    cache: Optional[DominanceCache] = None) -> SolutionSet:
    """Dispatch to the solver for ``concept``."""
    if concept == NASH:
        return pure_nash(cg)
    if concept == RATIONALIZABILITY:
        return rationalizable(cg)
    if concept == THP:
        return thp_certify(cg, epsilons, cache).solution_set(cg)
    raise InputError(f'unknown solution concept "{concept}", expected one of {", ".join(CONCEPTS)}')
