"""Configuration management and validation for coop2nf."""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Tuple

from .errors import ConfigError, InputError
from .solvers import DEFAULT_EPSILONS
from .utils import parse_rational

LOG_LEVELS = ('DEBUG', 'INFO', 'WARNING', 'ERROR')


@dataclass
class Config:
    """
    Run configuration shared by every command.

    Output: json_output, log_level.
    Generation: seed.
    Verification: dense_limit (largest n verified by exhaustive profile scans),
    epsilons (tremble grid for the perfect-equilibrium check).
    Oracle: oracle_tol, oracle_max_iter.
    """
    json_output: bool = False
    log_level: str = 'WARNING'
    seed: Optional[int] = None
    dense_limit: int = 4
    oracle_tol: float = 1e-9
    oracle_max_iter: int = 10000
    epsilons: Tuple[Fraction, ...] = field(default=DEFAULT_EPSILONS)


def load_config(args) -> Config:
    """
    Validate a parsed argument namespace into a Config.

    Missing attributes take their defaults. Every problem is collected before
    failing.

    Raises:
        ConfigError: one or more options are invalid.
    """
    errors = []

    log_level = str(getattr(args, 'log_level', None) or 'WARNING').upper()
    if log_level not in LOG_LEVELS:
        errors.append(f'--log-level must be one of {", ".join(LOG_LEVELS)}, got {log_level}')

    seed = getattr(args, 'seed', None)
    if seed is not None and (not isinstance(seed, int) or seed < 0):
        errors.append(f'--seed must be a non-negative integer, got {seed!r}')

    dense_limit = getattr(args, 'dense_limit', None)
    if dense_limit is None:
        dense_limit = 4
    elif not isinstance(dense_limit, int) or not 1 <= dense_limit <= 5:
        errors.append(f'--dense-limit must be an integer in 1..5, got {dense_limit!r}')

    oracle_tol = getattr(args, 'oracle_tol', None)
    if oracle_tol is None:
        oracle_tol = 1e-9
    elif not oracle_tol > 0:
        errors.append(f'--oracle-tol must be positive, got {oracle_tol}')

    oracle_max_iter = getattr(args, 'oracle_max_iter', None)
    if oracle_max_iter is None:
        oracle_max_iter = 10000
    elif oracle_max_iter < 1:
        errors.append(f'--oracle-max-iter must be at least 1, got {oracle_max_iter}')

    epsilons = DEFAULT_EPSILONS
    raw_epsilons = getattr(args, 'epsilons', None)
    if raw_epsilons:
        try:
            epsilons = tuple(parse_rational(token.strip()) for token in raw_epsilons.split(',') if token.strip())
            if not epsilons or not all(0 < eps < 1 for eps in epsilons):
                errors.append(f'--epsilons must be rationals strictly between 0 and 1, got {raw_epsilons}')
        except InputError as e:
            errors.append(f'--epsilons: {e}')

    if errors:
        raise ConfigError(errors)

    return Config(
        json_output=bool(getattr(args, 'json', False)),
        log_level=log_level,
        seed=seed,
        dense_limit=dense_limit,
        oracle_tol=float(oracle_tol),
        oracle_max_iter=oracle_max_iter,
        epsilons=epsilons,
    )
