"""Exception and warning types shared across the package."""


class JacobiError(Exception):
    """Base class for all package errors."""


class DomainError(JacobiError, ValueError):
    """A point lies outside (or numerically on the boundary of) its domain."""


class WeightError(JacobiError, ValueError):
    """Representation weight outside the admissible range."""


class CutoffError(JacobiError, ValueError):
    """Truncation cutoffs too small for the requested quantity."""


class BranchCutWarning(UserWarning):
    """Principal-branch power evaluated across the negative real axis."""


class ConvergenceWarning(UserWarning):
    """Truncated expansion has a tail above the requested tolerance."""


class BudgetWarning(UserWarning):
    """Monte Carlo budget too small for the requested standard error."""
