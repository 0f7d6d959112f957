"""Exception types shared across the package.

Every failure mode a caller is expected to branch on gets its own class, so
the CLI can map them to stable exit codes and tests can assert on them.
"""


class RegselError(Exception):
    """Base class for all package errors."""


class ShapeError(RegselError, ValueError):
    """Dimension mismatch or malformed array input."""


class ContractError(RegselError, ValueError):
    """A precondition on constants or problem data is violated.

    The message names the offending quantity (e.g. the failing modulus).
    """


class NumericBreakdownError(RegselError, RuntimeError):
    """A dense factorization or residual check failed beyond tolerance."""


class RegularityError(RegselError, RuntimeError):
    """Surjectivity or truncation nonemptiness failed.

    Raised when an operator is numerically non-surjective, or when a
    truncated inverse image is empty because the regularity constant was
    chosen too small for the instance.
    """


class LocalityError(RegselError, RuntimeError):
    """A query point left the certified neighborhood.

    Carries the violated bound in ``bound`` when known.
    """

    def __init__(self, message: str, bound: float | None = None):
        super().__init__(message)
        self.bound = bound


class InfeasibilitySuspectedError(RegselError, RuntimeError):
    """Alternating projections failed to settle within the round budget.

    ``last_iterate`` is the final iterate, ``gap`` the worst distance to a
    member set at that iterate.
    """

    def __init__(self, message: str, last_iterate=None, gap: float | None = None):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.gap = gap


class UncontrollableError(RegselError, RuntimeError):
    """Neither controllability test passed for a steering problem.

    ``rank_verdict`` and ``interior_verdict`` record the two test outcomes.
    """

    def __init__(self, message: str, rank_verdict: bool = False,
                 interior_verdict: bool = False):
        super().__init__(message)
        self.rank_verdict = rank_verdict
        self.interior_verdict = interior_verdict


class ProblemFileError(RegselError, ValueError):
    """A problem file failed to parse or validate.

    The message carries the JSON path of the offending field.
    """
