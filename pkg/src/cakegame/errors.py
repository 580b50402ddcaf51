"""Exception types shared across the package."""


class ContractError(ValueError):
    """A documented precondition or invariant was violated by the caller."""


class DomainError(ContractError):
    """Geometry outside the unit cake."""


class ResourceBudgetError(RuntimeError):
    """An enumeration would exceed its configured candidate budget."""


class HorizonExhausted(Exception):
    """Signal: the game session ran out of rounds mid-subroutine.

    Carries whatever partial progress the subroutine made so the caller
    can commit a best-so-far decision.
    """

    def __init__(self, partial=None):
        super().__init__("game horizon exhausted")
        self.partial = partial
