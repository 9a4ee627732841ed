"""Exception types shared across the lab."""

from __future__ import annotations


class EuclidLabError(Exception):
    """Base class for all lab errors."""


class DomainMismatch(EuclidLabError):
    """Operands belong to different domains."""


class EvalAtZero(EuclidLabError):
    """A size function was evaluated at zero, where it is undefined."""


class PrecisionExhausted(EuclidLabError):
    """A truncated-series value is zero modulo x^T, so the requested
    quantity (order, quotient, validity) is not determined at this
    precision."""


class RangeExceeded(EuclidLabError):
    """A degree fell outside the range a phi table covers."""


class DivisionByZero(EuclidLabError):
    """Division with a zero divisor."""


class IdentityFails(EuclidLabError):
    """A candidate division does not satisfy a = q*b + r."""


class WindowRequired(EuclidLabError):
    """The sublevel set of the size function is not finitely derivable;
    an explicit window is needed to bound the search."""


class BudgetZero(EuclidLabError):
    """A search family was given a zero enumeration budget."""


class DecompositionError(EuclidLabError):
    """Base class for failures of the base-power decomposition."""


class NonUniqueStep(DecompositionError):
    """Some step of the decomposition had a number of valid divisions
    different from one."""

    def __init__(self, value, count: int):
        self.value = value
        self.count = count
        super().__init__(f"step value {value!r} has {count} valid divisions, expected 1")


class NonUnitRemainder(DecompositionError):
    """A step produced a remainder that is neither zero nor a unit."""

    def __init__(self, remainder):
        self.remainder = remainder
        super().__init__(f"remainder {remainder!r} is neither zero nor a unit")


class NoDescent(DecompositionError):
    """The size of the running quotient failed to decrease strictly."""

    def __init__(self, value, size_before: int, size_after: int):
        self.value = value
        self.size_before = size_before
        self.size_after = size_after
        super().__init__(
            f"size did not descend at {value!r}: {size_after} >= {size_before}"
        )


class UpperBoundValue(EuclidLabError):
    """A refined value is only an upper bound; a computation that needs
    exact refined values must treat the affected pair as skipped."""


class ParseError(EuclidLabError):
    """Malformed element or function syntax on the command line."""
