"""Verdict values shared by all deciders."""

from dataclasses import dataclass, field


class BudgetError(RuntimeError):
    """A combinatorial budget (state count, pattern count, cap) was hit."""


@dataclass
class Verdict:
    """Outcome of a decision.

    holds is True/False for exact deciders and None for bounded refuters
    that found nothing ("unknown at horizon").  Exactly one of witness /
    counterexample is populated when holds is not None.  Counterexample
    walks are lists of point indices; extra keys describe the failure mode
    so certificates can be re-validated by direct simulation.
    """
    holds: object  # True | False | None
    witness: dict = None
    counterexample: dict = None
    states_explored: int = 0
    note: str = ""

    def __post_init__(self):
        if self.holds is True:
            assert self.counterexample is None
        if self.holds is False:
            assert self.counterexample is not None
