"""Exception types shared across the package."""


class LocsysError(Exception):
    """Base class for domain errors raised by this package."""


class NotAUnitError(LocsysError):
    """A matrix (or scalar) that was required to be invertible is not."""


class NotInCongruenceSubgroupError(LocsysError):
    """A matrix required to lie in Id + p*M_n was not congruent to Id mod p."""


class IndexOverflowError(LocsysError):
    """Coset enumeration exceeded the configured index bound."""


class BudgetExceededError(LocsysError):
    """A search space is larger than the caller's budget.

    Carries ``partial_count`` when some work was already done.
    """

    def __init__(self, message, partial_count=None):
        super().__init__(message)
        self.partial_count = partial_count


class BoundExceededError(LocsysError):
    """A closure computation grew past the caller-supplied bound."""


class ShapeViolationError(LocsysError):
    """An input violated a congruence shape contract (e.g. a naive lift
    whose relator values are not Id mod p^k)."""


class WordSyntaxError(ValueError):
    """A word string failed to parse; ``position`` is the offending token index."""

    def __init__(self, message, position=None):
        super().__init__(message)
        self.position = position
