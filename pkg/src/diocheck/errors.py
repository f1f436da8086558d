"""Exception types shared across the toolkit.

The CLI maps these onto process exit codes: usage and domain problems exit
with 2, failed audits with 1, and blown resource budgets with 3.
"""


class DiocheckError(Exception):
    """Base class for all toolkit-specific errors."""


class ParameterRangeError(DiocheckError, ValueError):
    """A parameter lies outside the range the underlying statement allows."""


class InadmissiblePairError(DiocheckError, ValueError):
    """An exponent-pair process left the admissibility region."""


class DegenerateSieveError(DiocheckError, ValueError):
    """A (D, z) combination fails the sandwich property and is rejected."""


class ResourceBudgetError(DiocheckError, RuntimeError):
    """A table or enumeration would exceed its configured budget."""


class OscillationBudgetError(DiocheckError, RuntimeError):
    """An oscillatory quadrature would need more panels than the budget allows."""
