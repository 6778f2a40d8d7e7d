"""Exception hierarchy for coop2nf."""

from typing import List, Sequence


class Coop2nfError(Exception):
    """Base class for every error raised by coop2nf."""


class InputError(Coop2nfError):
    """Malformed or out-of-range input (files, games, partitions, markets)."""


class AmbiguityError(InputError):
    """rho is not well-defined: two coalitions' dominant joint strategies both claim a player."""

    def __init__(self, first: int, second: int, player: int):
        self.first = first
        self.second = second
        self.player = player
        super().__init__(
            f'rho is ambiguous for player {player}: coalitions {first:#b} and {second:#b} '
            f'both have their dominant joint strategy played'
        )


class InteriorViolation(InputError):
    """Market violates the interior-solution condition for some embedded cartel."""

    def __init__(self, violating: Sequence):
        self.violating = list(violating)
        first = self.violating[0]
        super().__init__(
            f'interior condition fails for {len(self.violating)} embedded cartel(s), '
            f'first: coalition {first[0]:#b} in {first[1]}'
        )


class OracleError(Coop2nfError):
    """Best-response oracle did not converge or disagrees with the closed form."""


class InvariantViolation(Coop2nfError):
    """An internal invariant derived from the construction failed during a scan."""


class ConfigError(Coop2nfError):
    """Invalid command-line configuration; carries every collected problem."""

    def __init__(self, errors: List[str]):
        self.errors = list(errors)
        super().__init__('; '.join(self.errors))
