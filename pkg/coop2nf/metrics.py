"""Scan counters for monitoring coop2nf runs."""

import time
from dataclasses import dataclass


@dataclass
class ScanMetrics:
    """
    Counters for the expensive parts of a run.

    Attributes:
        profiles_evaluated: Payoff vectors computed by normal-form games (counter).
        partitions_verified: Composite games solved during verification (counter).
        lp_solves: Feasibility problems handed to the simplex (counter).
        lp_pivots: Simplex pivots performed (counter).
        oracle_iterations: Best-response oracle iterations (counter).
        last_run_duration_seconds: Duration of the last command in seconds (gauge).
    """
    profiles_evaluated: int = 0
    partitions_verified: int = 0
    lp_solves: int = 0
    lp_pivots: int = 0
    oracle_iterations: int = 0
    last_run_duration_seconds: float = 0.0

    def record_run_start(self) -> float:
        """Record start of a command and return start time."""
        return time.time()

    def record_run_end(self, start_time: float) -> None:
        """Record end of a command."""
        self.last_run_duration_seconds = time.time() - start_time

    def record_profile(self) -> None:
        """Record one payoff evaluation."""
        self.profiles_evaluated += 1

    def record_partition(self) -> None:
        """Record one verified composite game."""
        self.partitions_verified += 1

    def record_lp(self, pivots: int) -> None:
        """Record a finished feasibility solve."""
        self.lp_solves += 1
        self.lp_pivots += pivots

    def record_oracle(self, iterations: int) -> None:
        """Record a finished oracle run."""
        self.oracle_iterations += iterations

    def reset(self) -> None:
        """Zero every counter."""
        self.profiles_evaluated = 0
        self.partitions_verified = 0
        self.lp_solves = 0
        self.lp_pivots = 0
        self.oracle_iterations = 0
        self.last_run_duration_seconds = 0.0

    def summary(self) -> str:
        """One-line summary for the log."""
        return (
            f'profiles={self.profiles_evaluated} partitions={self.partitions_verified} '
            f'lp_solves={self.lp_solves} lp_pivots={self.lp_pivots} '
            f'oracle_iterations={self.oracle_iterations} '
            f'duration={self.last_run_duration_seconds:.2f}s'
        )


metrics = ScanMetrics()
"""Global metrics instance for the application."""
