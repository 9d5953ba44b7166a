"""Exception hierarchy.

The CLI maps these onto exit codes: parse/usage problems exit 2,
mathematical precondition failures and capability limits exit 3.
"""


class DigitprodError(Exception):
    """Base class for all errors raised by this package."""


class InputError(DigitprodError, ValueError):
    """Invalid argument: bad parameters, divergent spec, excluded point."""


class ParseError(InputError):
    """Syntax error in a factor-expression string; carries a position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class EvaluationError(DigitprodError, ArithmeticError):
    """Evaluation hit a pole, a nonpositive logarithm, or a zero divide."""


class CapabilityError(DigitprodError):
    """Request exceeds a documented capability limit."""


class ConsistencyError(DigitprodError):
    """An internal cross-check failed beyond its tolerance."""
