"""
Exception hierarchy shared by every robustkz module.

Validation problems subclass ValueError so callers that only know about
ValueError keep working.
"""


class RobustKZError(Exception):
    """Base class for all robustkz errors."""


class InstanceValidationError(RobustKZError, ValueError):
    """An instance or instance document violates the schema or its invariants."""


class MetricError(RobustKZError, ValueError):
    """Bad input to a metric-space primitive (index range, dimension, empty set)."""


class NonEuclideanError(MetricError):
    """An operation that needs coordinates under the l2 norm got something else."""


class DegenerateConfigurationError(RobustKZError, ValueError):
    """A ratio or bound is undefined for the given configuration."""


class CodeConstructionError(RobustKZError):
    """A balanced code could not be built with the requested parameters."""


class BudgetExceededError(RobustKZError):
    """An exhaustive enumeration would exceed its configured budget."""

    def __init__(self, what: str, required: int, budget: int):
        self.what = what
        self.required = required
        self.budget = budget
        super().__init__(
            f"{what} needs {required} evaluations, budget is {budget}; "
            f"raise the budget or use an approximation algorithm"
        )
