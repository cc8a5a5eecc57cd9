"""Exception hierarchy shared by all modules."""


class HodgeSpecError(Exception):
    """Base class for library errors."""


class DomainError(HodgeSpecError, ValueError):
    """An argument lies outside the domain of the operation."""


class ConstructionError(HodgeSpecError, ValueError):
    """A profile, channel or operator could not be built from its parameters."""


class EvaluationError(HodgeSpecError, ArithmeticError):
    """A profile or potential produced non-finite values."""


class AssemblyError(HodgeSpecError, ArithmeticError):
    """A matrix coefficient was non-finite at some grid node."""


class UndefinedError(HodgeSpecError, ValueError):
    """A quantity is undefined for the given input (e.g. a divergent integral)."""
