"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class PelError(Exception):
    """Base class for domain errors (CLI exit code 1 unless noted)."""


class ParseError(PelError):
    """Syntax error in surface text; carries a 1-based line and column."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line = line
        self.col = col
        super().__init__(f"{line}:{col}: {message}" if line else message)


class LabelClosureError(PelError):
    """A choice refers to a label with no enclosing generator."""


class LabelJudgmentViolation(PelError):
    pass


class IncomparableLabels(PelError):
    """plusL/plusR would need to compare two labels the label order leaves unrelated."""


class NotARedex(PelError):
    pass


class NotNormalForm(PelError):
    pass


class StepBudgetExceeded(PelError):
    """Reduction did not finish within the budget.

    ``trace`` holds the steps performed so far and ``term`` the last term
    reached; ``residual`` is the probability mass left unresolved (only set
    by distribution evaluation).
    """

    def __init__(self, message: str, trace=None, term=None, residual=None):
        super().__init__(message)
        self.trace = trace if trace is not None else []
        self.term = term
        self.residual = residual


class PelTypeError(PelError):
    pass


class UnboundVariable(PelTypeError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unbound variable {name}")


class UnificationFailure(PelTypeError):
    def __init__(self, position, expected, found, reason: str = "cannot unify"):
        self.position = position
        self.expected = expected
        self.found = found
        self.reason = reason
        super().__init__(f"{reason} at {position}: expected {expected}, found {found}")


class GenerationExhausted(PelError):
    pass
