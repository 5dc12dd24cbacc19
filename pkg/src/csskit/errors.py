"""Exception types shared across the package."""

from __future__ import annotations


class CssError(Exception):
    """Base class for all csskit errors."""


class ExprSyntaxError(CssError, SyntaxError):
    """Malformed expression source; `offset` is the byte position of the fault."""

    def __init__(self, message: str, offset: int) -> None:
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class UnknownIdentifier(CssError):
    """Expression references a name outside its declared variable set."""

    def __init__(self, name: str, offset: int) -> None:
        super().__init__(f"unknown identifier '{name}' (at offset {offset})")
        self.name = name
        self.offset = offset


class EvalError(CssError):
    """Expression evaluation left the real domain (NaN, overflow, log of <= 0, ...)."""


class QuadratureNonConvergence(CssError):
    """Adaptive quadrature hit max recursion depth before meeting tolerance."""


class SingularMatrix(CssError):
    """4x4 symmetric matrix is numerically singular."""


class DomainError(CssError):
    """A closed-form ingredient is undefined at the requested point.

    The message names the offending sub-expression (negative radicand,
    vanishing divisor, positive metric determinant where disallowed).
    """


class GenerationFailure(CssError):
    """Random model generation exhausted its rejection-sampling budget."""


class ConfigError(CssError):
    """Config file violates the schema (unknown key, missing key, bad value)."""
