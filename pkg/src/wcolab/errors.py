"""Exception hierarchy shared across the laboratory.

Two branches matter for the command line: InputError means the caller handed
us something malformed or out of domain (exit code 2), ConstraintError means
the request was well formed but violates a documented precondition such as an
order policy or a branch-cut restriction (exit code 3).
"""


class WcolabError(Exception):
    """Base class for all errors raised by this package."""


class InputError(WcolabError, ValueError):
    """Malformed or out-of-domain input."""


class ConstraintError(WcolabError, ValueError):
    """Well-formed input that violates a documented precondition."""


class DegenerateMapError(InputError):
    """Coefficient quadruple with (numerically) vanishing determinant."""


class NotSelfMapError(InputError):
    """The map does not send the open unit disk into itself."""


class NotParabolicError(ConstraintError):
    """A parabolic-only operation was invoked on a non-parabolic map."""


class BranchError(ConstraintError):
    """Fractional power whose base touches the principal branch cut."""


class PoleAtOriginError(ConstraintError):
    """Composition would place a pole at the series expansion point 0."""


class OrderPolicyError(ConstraintError):
    """Truncation orders violate the working-order policy (e.g. M < 2N)."""


class UnboundedWeightError(ConstraintError):
    """Weight symbol blows up on the sample grid near the unit circle."""


class UnknownScenarioError(InputError):
    """Scenario id not present in the registry."""
