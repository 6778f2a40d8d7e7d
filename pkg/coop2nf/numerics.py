"""
Exact rational arithmetic helpers and linear feasibility.

``lp_feasible`` runs a Phase-I simplex over ``fractions.Fraction`` with Bland's
anti-cycling rule. A feasible system comes back with a witness that satisfies
every row exactly; an infeasible one comes back with a Farkas certificate: a
combination of the rows (nonnegative on ``>=`` rows) whose coefficients vanish
while its bound is strictly positive.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence

from .errors import InputError, InvariantViolation
from .logger import logger
from .metrics import metrics

Rational = Fraction

GEQ = '>='
EQ = '='


@dataclass(frozen=True)
class Row:
    """One constraint ``coefficients . x (sense) bound``."""
    coefficients: Sequence[Fraction]
    bound: Fraction
    sense: str = GEQ
    label: str = ''


@dataclass
class LinearSystem:
    """
    Rows over ``num_vars`` variables.

    Variables are free unless ``nonnegative`` is set, in which case every
    variable is additionally constrained to be >= 0.
    """
    num_vars: int
    rows: List[Row] = field(default_factory=list)
    nonnegative: bool = False

    def __post_init__(self):
        for index, row in enumerate(self.rows):
            self._check_row(index, row)

    def _check_row(self, index: int, row: Row) -> None:
        if len(row.coefficients) != self.num_vars:
            raise InputError(
                f'row {index} has {len(row.coefficients)} coefficients, expected {self.num_vars}'
            )
        if row.sense not in (GEQ, EQ):
            raise InputError(f'row {index} has unknown sense "{row.sense}"')

    def add(self, coefficients: Sequence, bound, sense: str = GEQ, label: str = '') -> None:
        """Append a row, converting entries to exact rationals."""
        row = Row(tuple(Fraction(c) for c in coefficients), Fraction(bound), sense, label)
        self._check_row(len(self.rows), row)
        self.rows.append(row)

    def satisfied_by(self, x: Sequence[Fraction]) -> bool:
        """Exact substitution check."""
        if self.nonnegative and any(value < 0 for value in x):
            return False
        for row in self.rows:
            lhs = sum((c * value for c, value in zip(row.coefficients, x)), Fraction(0))
            if row.sense == EQ and lhs != row.bound:
                return False
            if row.sense == GEQ and lhs < row.bound:
                return False
        return True

    def certifies_infeasibility(self, multipliers: Sequence[Fraction]) -> bool:
        """
        Whether ``multipliers`` is a Farkas certificate for this system.

        The combination must be nonnegative on ``>=`` rows, have a strictly
        positive bound, and coefficients that vanish (or, for nonnegative
        variables, are all <= 0).
        """
        if len(multipliers) != len(self.rows):
            return False
        for weight, row in zip(multipliers, self.rows):
            if row.sense == GEQ and weight < 0:
                return False
        combined = [
            sum((weight * row.coefficients[k] for weight, row in zip(multipliers, self.rows)), Fraction(0))
            for k in range(self.num_vars)
        ]
        bound = sum((weight * row.bound for weight, row in zip(multipliers, self.rows)), Fraction(0))
        if self.nonnegative:
            return bound > 0 and all(value <= 0 for value in combined)
        return bound > 0 and all(value == 0 for value in combined)


@dataclass
class Feasibility:
    """Outcome of ``lp_feasible``: a witness or a Farkas certificate."""
    feasible: bool
    witness: Optional[List[Fraction]] = None
    certificate: Optional[List[Fraction]] = None
    pivots: int = 0


class _PhaseOneTableau:
    """Dense Phase-I tableau; single use."""

    def __init__(self, system: LinearSystem):
        self.system = system
        nv = system.num_vars
        self.structural = nv if system.nonnegative else 2 * nv
        geq_rows = [i for i, row in enumerate(system.rows) if row.sense == GEQ]
        self.surplus_col = {i: self.structural + k for k, i in enumerate(geq_rows)}
        self.artificial_start = self.structural + len(geq_rows)
        m = len(system.rows)
        self.width = self.artificial_start + m
        self.signs = []
        self.table: List[List[Fraction]] = []
        self.rhs: List[Fraction] = []
        for i, row in enumerate(system.rows):
            sign = 1 if row.bound >= 0 else -1
            entries = [Fraction(0)] * self.width
            for k, coefficient in enumerate(row.coefficients):
                entries[k] = sign * coefficient
                if not system.nonnegative:
                    entries[nv + k] = -sign * coefficient
            if i in self.surplus_col:
                entries[self.surplus_col[i]] = Fraction(-sign)
            entries[self.artificial_start + i] = Fraction(1)
            self.signs.append(sign)
            self.table.append(entries)
            self.rhs.append(sign * row.bound)
        self.basis = [self.artificial_start + i for i in range(m)]
        # reduced costs of the Phase-I objective (sum of artificials)
        self.reduced = [Fraction(0)] * self.width
        for j in range(self.artificial_start):
            self.reduced[j] = -sum((self.table[i][j] for i in range(m)), Fraction(0))
        self.objective = sum(self.rhs, Fraction(0))
        self.pivots = 0

    def _pivot(self, row: int, col: int) -> None:
        pivot_row = self.table[row]
        value = pivot_row[col]
        if value != 1:
            for j in range(self.width):
                if pivot_row[j]:
                    pivot_row[j] /= value
            self.rhs[row] /= value
        for i, other in enumerate(self.table):
            if i == row:
                continue
            factor = other[col]
            if factor:
                for j in range(self.width):
                    if pivot_row[j]:
                        other[j] -= factor * pivot_row[j]
                self.rhs[i] -= factor * self.rhs[row]
        factor = self.reduced[col]
        if factor:
            for j in range(self.width):
                if pivot_row[j]:
                    self.reduced[j] -= factor * pivot_row[j]
            self.objective += factor * self.rhs[row]
        self.basis[row] = col
        self.pivots += 1

    def solve(self) -> None:
        """Bland's rule: lowest-index entering column, lowest-index leaving basic variable."""
        while True:
            entering = next((j for j in range(self.width) if self.reduced[j] < 0), None)
            if entering is None:
                return
            leaving = None
            best = None
            for i, row in enumerate(self.table):
                if row[entering] > 0:
                    ratio = self.rhs[i] / row[entering]
                    if best is None or ratio < best or (ratio == best and self.basis[i] < self.basis[leaving]):
                        best, leaving = ratio, i
            if leaving is None:
                # cannot happen: the Phase-I objective is bounded below by zero
                raise InvariantViolation('Phase-I simplex reported an unbounded direction')
            self._pivot(leaving, entering)

    def witness(self) -> List[Fraction]:
        values = [Fraction(0)] * self.width
        for i, column in enumerate(self.basis):
            values[column] = self.rhs[i]
        nv = self.system.num_vars
        if self.system.nonnegative:
            return values[:nv]
        return [values[k] - values[nv + k] for k in range(nv)]

    def certificate(self) -> List[Fraction]:
        # reduced cost of artificial i is 1 - y_i
        return [
            (1 - self.reduced[self.artificial_start + i]) * sign
            for i, sign in enumerate(self.signs)
        ]


def lp_feasible(system: LinearSystem) -> Feasibility:
    """
    Decide feasibility of ``system`` exactly.

    Returns a witness that re-substitutes exactly, or a Farkas certificate that
    re-multiplies to an all-zero row with strictly positive bound.
    """
    if not system.rows:
        return Feasibility(True, witness=[Fraction(0)] * system.num_vars)

    tableau = _PhaseOneTableau(system)
    tableau.solve()
    metrics.record_lp(tableau.pivots)
    logger.debug(f'Phase-I finished after {tableau.pivots} pivots, objective {tableau.objective}')

    if tableau.objective == 0:
        witness = tableau.witness()
        if not system.satisfied_by(witness):
            raise InvariantViolation('simplex witness does not satisfy the system')
        return Feasibility(True, witness=witness, pivots=tableau.pivots)

    certificate = tableau.certificate()
    if not system.certifies_infeasibility(certificate):
        raise InvariantViolation('simplex certificate does not prove infeasibility')
    return Feasibility(False, certificate=certificate, pivots=tableau.pivots)
