"""Exception hierarchy shared by every module of the package."""


class MacroUncError(Exception):
    """Base class for package errors."""


class DomainError(MacroUncError, ValueError):
    """Input outside the mathematical domain of an operation."""


class SizeError(MacroUncError, ValueError):
    """Sample too short, or a size/order argument out of range."""


class SingularityError(MacroUncError, ArithmeticError):
    """Rank-deficient or degenerate design."""


class NumericalFailure(MacroUncError, ArithmeticError):
    """Overflow or non-finite values during a numerical procedure."""


class LoadError(MacroUncError, ValueError):
    """Malformed input file or configuration."""
