"""Exception hierarchy shared by the engine."""


class HomotopicalError(Exception):
    """Base class for every error raised by this package."""


class ParseError(HomotopicalError, ValueError):
    """Input could not be read as a category, structure, groupoid or matrix."""


class CategoryError(HomotopicalError, ValueError):
    """A query referenced an unknown object or a non-composable pair."""


class StructureError(HomotopicalError, ValueError):
    """A homotopical structure does not fit the category it is attached to."""


class DomainError(HomotopicalError, ValueError):
    """An operation was asked about an object outside the structure's base."""


class WitnessError(HomotopicalError):
    """A required witness is missing or fails its defining equations."""


class ContractError(HomotopicalError, ValueError):
    """Numeric precondition violated beyond tolerance."""


class BudgetExceeded(HomotopicalError):
    """Enumeration exceeded its configured size limit."""


class CongruenceError(HomotopicalError):
    """The homotopy relation is not a verified congruence."""
