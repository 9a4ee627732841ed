"""Candidate size functions f: R \\ {0} -> non-negative integers.

Built-in kinds cover the classical functions (absolute value, degree,
order, quadratic norm), plus three configurable families: strictly
increasing reshapings of the degree (``phi_deg``), explicit tables on
finite fields, and finite exception overlays on any built-in base.
A function is never evaluated at zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property

from .domains import DomainKind, DomainSpec, Element
from .errors import (
    EuclidLabError,
    EvalAtZero,
    PrecisionExhausted,
    RangeExceeded,
)


class FnKind(Enum):
    ABS_VALUE = "abs"
    DEGREE = "deg"
    ORDER = "ord"
    QUAD_NORM = "norm"
    PHI_DEG = "phi_deg"
    FIELD_TABLE = "table"
    EXCEPTION_TABLE = "exceptions"


# kinds whose multiplicative growth f(a) <= f(ab) holds by construction
STRONG_BUILTINS = frozenset(
    {FnKind.ABS_VALUE, FnKind.DEGREE, FnKind.ORDER, FnKind.QUAD_NORM, FnKind.PHI_DEG}
)

_KIND_DOMAINS = {
    FnKind.ABS_VALUE: (DomainKind.INTEGERS,),
    FnKind.DEGREE: (DomainKind.POLY,),
    FnKind.ORDER: (DomainKind.SERIES,),
    FnKind.QUAD_NORM: (DomainKind.QUADRATIC,),
    FnKind.PHI_DEG: (DomainKind.POLY,),
    FnKind.FIELD_TABLE: (DomainKind.FINITE_FIELD,),
}


@dataclass(frozen=True)
class EuclideanFnSpec:
    """Description of a candidate size function.

    ``phi`` is a strictly increasing value table indexed by degree
    (phi_deg only).  ``table`` maps every nonzero field element to a
    value (field tables only).  ``base`` plus ``exceptions`` overlay a
    finite set of overridden points on a built-in kind.
    """

    kind: FnKind
    phi: tuple[int, ...] | None = None
    table: tuple[tuple[Element, int], ...] | None = None
    base: "EuclideanFnSpec | None" = None
    exceptions: tuple[tuple[Element, int], ...] | None = None

    # -- constructors --------------------------------------------------

    @staticmethod
    def abs_value() -> "EuclideanFnSpec":
        return EuclideanFnSpec(FnKind.ABS_VALUE)

    @staticmethod
    def degree() -> "EuclideanFnSpec":
        return EuclideanFnSpec(FnKind.DEGREE)

    @staticmethod
    def order() -> "EuclideanFnSpec":
        return EuclideanFnSpec(FnKind.ORDER)

    @staticmethod
    def quad_norm() -> "EuclideanFnSpec":
        return EuclideanFnSpec(FnKind.QUAD_NORM)

    @staticmethod
    def phi_deg(phi) -> "EuclideanFnSpec":
        return EuclideanFnSpec(FnKind.PHI_DEG, phi=tuple(phi))

    @staticmethod
    def field_table(mapping) -> "EuclideanFnSpec":
        items = tuple(sorted(mapping.items(), key=lambda kv: kv[0].payload))
        return EuclideanFnSpec(FnKind.FIELD_TABLE, table=items)

    @staticmethod
    def with_exceptions(base: "EuclideanFnSpec", mapping) -> "EuclideanFnSpec":
        if base.kind is FnKind.EXCEPTION_TABLE:
            raise EuclidLabError("exception tables do not nest")
        items = tuple(sorted(mapping.items(), key=lambda kv: repr(kv[0].payload)))
        return EuclideanFnSpec(FnKind.EXCEPTION_TABLE, base=base, exceptions=items)

    # -- views ----------------------------------------------------------

    @cached_property
    def table_map(self) -> dict[Element, int]:
        return dict(self.table or ())

    @cached_property
    def exception_map(self) -> dict[Element, int]:
        return dict(self.exceptions or ())

    def compatible_with(self, domain: DomainSpec) -> bool:
        if self.kind is FnKind.EXCEPTION_TABLE:
            return self.base.compatible_with(domain)
        if self.kind is FnKind.FIELD_TABLE:
            return any(e.domain == domain for e, _ in self.table or ())
        return domain.kind in _KIND_DOMAINS[self.kind]

    def label(self) -> str:
        k = self.kind
        if k is FnKind.PHI_DEG:
            return f"phi_deg{list(self.phi)}"
        if k is FnKind.FIELD_TABLE:
            vals = ",".join(str(v) for _, v in self.table)
            return f"table[{vals}]"
        if k is FnKind.EXCEPTION_TABLE:
            pts = ",".join(f"{e.payload}:{v}" for e, v in self.exceptions)
            return f"{self.base.label()}+{{{pts}}}"
        return k.value


def evaluate(fn: EuclideanFnSpec, a: Element) -> int:
    """Value of the size function at a nonzero element.

    Raises EvalAtZero at zero (PrecisionExhausted for the series zero
    residue, whose true order is unknowable at this precision) and
    RangeExceeded when a degree falls outside a phi table.
    """
    if a.domain.kind is not DomainKind.SERIES and a.is_zero():
        raise EvalAtZero(f"size function evaluated at zero in {a.domain.label()}")
    k = fn.kind
    if k is FnKind.ABS_VALUE:
        return abs(a.payload)
    if k is FnKind.DEGREE:
        return a.degree()
    if k is FnKind.ORDER:
        return a.order()  # raises PrecisionExhausted on the zero residue
    if k is FnKind.QUAD_NORM:
        return a.norm()
    if k is FnKind.PHI_DEG:
        d = a.degree()
        if d >= len(fn.phi):
            raise RangeExceeded(f"degree {d} beyond phi table of length {len(fn.phi)}")
        return fn.phi[d]
    if k is FnKind.FIELD_TABLE:
        try:
            return fn.table_map[a]
        except KeyError:
            raise EuclidLabError(f"table has no entry for {a!r}") from None
    if a.domain.kind is DomainKind.SERIES and not any(a.payload):
        raise PrecisionExhausted("zero residue under an exception table")
    try:
        return fn.exception_map[a]
    except KeyError:
        return evaluate(fn.base, a)


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NonIncreasingPhi:
    index: int
    value: int
    next_value: int

    def __str__(self) -> str:
        return (
            f"phi is not strictly increasing at {self.index}: "
            f"phi({self.index})={self.value}, phi({self.index + 1})={self.next_value}"
        )


@dataclass(frozen=True)
class PartialTable:
    missing: Element

    def __str__(self) -> str:
        return f"table is missing an entry for {self.missing!r}"


@dataclass(frozen=True)
class NegativeValue:
    where: str
    value: int

    def __str__(self) -> str:
        return f"negative value {self.value} at {self.where}"


@dataclass(frozen=True)
class BadTableKey:
    key: Element

    def __str__(self) -> str:
        return f"table key {self.key!r} is zero or from the wrong domain"


FnSpecProblem = NonIncreasingPhi | PartialTable | NegativeValue | BadTableKey


def validate_fspec(
    fn: EuclideanFnSpec, domain: DomainSpec | None = None
) -> FnSpecProblem | None:
    """First violated invariant of the spec, or None when well formed."""
    k = fn.kind
    if k is FnKind.PHI_DEG:
        phi = fn.phi or ()
        for i, v in enumerate(phi):
            if v < 0:
                return NegativeValue(f"phi({i})", v)
        for i in range(len(phi) - 1):
            if phi[i + 1] <= phi[i]:
                return NonIncreasingPhi(i, phi[i], phi[i + 1])
        return None
    if k is FnKind.FIELD_TABLE:
        items = fn.table or ()
        for e, v in items:
            if v < 0:
                return NegativeValue(f"table[{e.payload}]", v)
            if e.is_zero():
                return BadTableKey(e)
        if domain is None and items:
            domain = items[0][0].domain
        if domain is not None:
            have = {e for e, _ in items}
            for i in range(1, domain.q):
                e = domain.element(i)
                if e not in have:
                    return PartialTable(e)
        return None
    if k is FnKind.EXCEPTION_TABLE:
        for e, v in fn.exceptions or ():
            if v < 0:
                return NegativeValue(f"exception[{e.payload}]", v)
            if e.is_zero():
                return BadTableKey(e)
            if domain is not None and e.domain != domain:
                return BadTableKey(e)
        return validate_fspec(fn.base, domain)
    return None


def default_fn(domain: DomainSpec) -> EuclideanFnSpec:
    """The classical size function each ring is measured by."""
    k = domain.kind
    if k is DomainKind.INTEGERS:
        return EuclideanFnSpec.abs_value()
    if k is DomainKind.QUADRATIC:
        return EuclideanFnSpec.quad_norm()
    if k is DomainKind.POLY:
        return EuclideanFnSpec.degree()
    if k is DomainKind.SERIES:
        return EuclideanFnSpec.order()
    raise EuclidLabError(f"{domain.label()} has no single default size function")
