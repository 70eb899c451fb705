"""Exception types and the shared computation budget."""

from __future__ import annotations


class LyutabError(Exception):
    """Base class for all errors raised by this package."""


class RingMismatchError(LyutabError):
    """Operands belong to different polynomial rings."""


class ExponentBoundError(LyutabError):
    """A Frobenius power would exceed the documented exponent cap."""


class ParseError(LyutabError):
    """Input text does not conform to the documented grammar."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        if line:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


class BudgetExceededError(LyutabError):
    """The configured S-pair budget was exhausted before completion."""


class NotFPureError(LyutabError):
    """The quotient ring is not F-pure, so Lyubeznik entries are undefined.

    Raw degree-zero double-Ext dimensions are still computable via the
    ungated entry point, but without F-purity they need not equal the
    Lyubeznik numbers (the raw dimension can be strictly larger).
    """


class InternalAssertionError(LyutabError):
    """An internal consistency assertion failed; indicates a logic error."""


class Budget:
    """Mutable counter limiting the number of S-pair reductions.

    One instance is threaded through every Groebner-type computation of a
    job; :meth:`tick` raises :class:`BudgetExceededError` once the cap is
    reached.  The default cap is deliberately generous; it exists to turn
    pathological blow-ups into a clean, reportable failure.
    """

    DEFAULT_LIMIT = 10_000_000

    def __init__(self, limit: int | None = None):
        self.limit = self.DEFAULT_LIMIT if limit is None else int(limit)
        self.used = 0

    def tick(self, amount: int = 1) -> None:
        self.used += amount
        if self.used > self.limit:
            raise BudgetExceededError(
                f"S-pair budget exceeded ({self.used} > {self.limit})"
            )

    def remaining(self) -> int:
        return max(self.limit - self.used, 0)


DEFAULT_BUDGET = Budget()
