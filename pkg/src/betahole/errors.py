"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class HypothesisViolation(ValueError):
    """A caller-verified precondition of a property check does not hold."""


class InvariantViolation(RuntimeError):
    """Two independent routes to the same answer disagree.

    This always indicates a bug (or a broken input model), never a tolerance
    issue; the CLI maps it to exit status 2.
    """
