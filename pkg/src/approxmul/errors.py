"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Raised when an operand width, truncation level, or spec field is invalid."""


class BudgetExceededError(RuntimeError):
    """Raised when an exhaustive sweep would enumerate more pairs than the budget.

    Callers that hit this should switch to a sampled sweep instead.
    """


class FixedPointOverflowError(OverflowError):
    """Raised when a real value does not fit the target fixed-point format."""
