"""The refined size function: pointwise minimum of f over all nonzero
multiples, with explicit exactness certificates.

The defining minimum ranges over an infinite set on most rings, so a
computed value is only claimed Exact when a certificate justifies it:

* closed_form_field   -- on a field every nonzero element is a multiple
  of every other, so the minimum is the global minimum of f.
* fixed_point_strong  -- the classical functions (absolute value,
  degree, order, quadratic norm) never shrink under multiplication, so
  refining them changes nothing.
* monotone_bound      -- for a finite exception overlay on such a base
  g, the floor g(a*b) >= g(a) bounds how far the multiples of a must be
  enumerated; once every multiple below the running minimum has been
  examined, the minimum is exact.

Anything else is an upper bound from a bounded search, and consumers
must quarantine it: property checks over the refinement never treat an
upper bound as exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from math import isqrt

from .division import exact_quotient
from .domains import (
    DomainKind,
    DomainSpec,
    Element,
    Window,
    enumerate_nonzero,
    window_covers_domain,
)
from .errors import (
    EvalAtZero,
    PrecisionExhausted,
    RangeExceeded,
    UpperBoundValue,
    WindowRequired,
)
from .functions import EuclideanFnSpec, FnKind, evaluate
from .properties import (
    PropertyKind,
    PropertyReport,
    Verdict,
    Witness,
    _final_verdict,
    check_property,
    scan_strongly,
    scan_ultra,
)

_FIXED_POINT_KINDS = frozenset(
    {FnKind.ABS_VALUE, FnKind.DEGREE, FnKind.ORDER, FnKind.QUAD_NORM}
)

# escalation guard for the monotone-bound loop
_MONOTONE_LIMIT = 1 << 16


class Certainty(Enum):
    EXACT = "exact"
    UPPER_BOUND = "upper_bound"


class CertReason(Enum):
    CLOSED_FORM_FIELD = "closed_form_field"
    FIXED_POINT_STRONG = "fixed_point_strong"
    MONOTONE_BOUND = "monotone_bound"
    BOUNDED_SEARCH = "bounded_search"


@dataclass(frozen=True)
class CertifiedValue:
    value: int
    certainty: Certainty
    reason: CertReason

    @property
    def exact(self) -> bool:
        return self.certainty is Certainty.EXACT


def refine_eval(
    fn: EuclideanFnSpec, a: Element, window: Window | None = None
) -> CertifiedValue:
    """Refined value at a, with the strongest certificate available.

    Exact routes are tried first; when none applies, the minimum over
    multiples from the window is returned as an upper bound.  Without a
    window the inexact route raises WindowRequired.
    """
    domain = a.domain
    if domain.kind is DomainKind.SERIES and a.is_zero():
        raise PrecisionExhausted("refining the zero residue")
    if a.is_zero():
        raise EvalAtZero("refined value at zero")

    if domain.is_field:
        best = min(
            evaluate(fn, e) for e in enumerate_nonzero(domain, Window.whole())
        )
        return CertifiedValue(best, Certainty.EXACT, CertReason.CLOSED_FORM_FIELD)

    if fn.kind in _FIXED_POINT_KINDS:
        return CertifiedValue(
            evaluate(fn, a), Certainty.EXACT, CertReason.FIXED_POINT_STRONG
        )

    if fn.kind is FnKind.PHI_DEG or (
        fn.kind is FnKind.EXCEPTION_TABLE and fn.base.kind in _FIXED_POINT_KINDS
    ) or (
        fn.kind is FnKind.EXCEPTION_TABLE and fn.base.kind is FnKind.PHI_DEG
    ):
        value = _monotone_bound(fn, a)
        if value is not None:
            return CertifiedValue(value, Certainty.EXACT, CertReason.MONOTONE_BOUND)

    if window is None:
        raise WindowRequired(
            f"no exact certificate for {fn.label()}; a window is needed "
            "for a bounded search"
        )
    best = evaluate(fn, a)  # the multiple a*1
    for b in enumerate_nonzero(domain, window):
        try:
            best = min(best, evaluate(fn, a * b))
        except (PrecisionExhausted, RangeExceeded):
            continue
    return CertifiedValue(best, Certainty.UPPER_BOUND, CertReason.BOUNDED_SEARCH)


def _monotone_bound(fn: EuclideanFnSpec, a: Element) -> int | None:
    """Exact refined value via the base-function floor, or None when no
    certificate is reachable.

    The multiples of a are walked level by level in ascending base
    value; the first level containing a non-excepted multiple pins the
    base minimum, because every later multiple has a value at least as
    large.  A level stops at its first non-excepted hit, so the walk
    costs O(|exceptions|) products per level.
    """
    if fn.kind is FnKind.PHI_DEG:
        base, exceptions = fn, {}
    else:
        base, exceptions = fn.base, fn.exception_map
    try:
        floor = evaluate(base, a)
    except RangeExceeded:
        return None

    best_exception: int | None = None
    for e, v in exceptions.items():
        if exact_quotient(e, a) is not None:
            best_exception = v if best_exception is None else min(best_exception, v)

    if best_exception is not None and best_exception <= floor:
        return best_exception

    base_min: int | None = None
    for value, multipliers in _multiplier_levels(base, a):
        if best_exception is not None and best_exception <= value:
            return best_exception
        for b in multipliers:
            if a * b not in exceptions:
                base_min = value
                break
        if base_min is not None:
            break
    if base_min is None:
        # every in-range multiple is excepted; the region beyond carries
        # no certificate
        return None
    return base_min if best_exception is None else min(base_min, best_exception)


def _multiplier_levels(base: EuclideanFnSpec, a: Element):
    """Yield (value of base at a*b, iterator of multipliers b) in
    strictly ascending value order, exhausting all nonzero b."""
    domain = a.domain
    kind = base.kind
    if kind is FnKind.ABS_VALUE:
        mag = abs(a.payload)
        k = 1
        while k <= _MONOTONE_LIMIT:
            yield k * mag, (Element(domain, k), Element(domain, -k))
            k += 1
        return
    if kind in (FnKind.DEGREE, FnKind.PHI_DEG):
        deg_a = a.degree()
        table = base.phi if kind is FnKind.PHI_DEG else None
        level = 0
        while True:
            total = deg_a + level
            if table is not None:
                if total >= len(table):
                    return
                value = table[total]
            else:
                value = total
            yield value, _polys_of_degree(domain, level)
            level += 1
        return
    if kind is FnKind.ORDER:
        T = domain.precision
        ord_a = a.order()
        for level in range(T - ord_a):
            yield ord_a + level, _residues_of_order(domain, level)
        return
    if kind is FnKind.QUAD_NORM:
        if domain.d > 0:
            return  # infinite unit orbits: no level structure to walk
        norm_a = a.norm()
        for k in range(1, _MONOTONE_LIMIT):
            bs = _quad_elements_of_norm(domain, k)
            if bs:
                yield norm_a * k, bs
        return


def _polys_of_degree(domain: DomainSpec, degree: int):
    q = domain.q
    for n in range(q**degree, q ** (degree + 1)):
        digits = []
        m = n
        while m:
            m, c = divmod(m, q)
            digits.append(c)
        yield Element(domain, tuple(digits))


def _residues_of_order(domain: DomainSpec, order: int):
    T = domain.precision
    q = domain.q
    prefix = (0,) * order
    for first in range(1, q):
        for n in range(q ** (T - order - 1)):
            digits = [first]
            m = n
            for _ in range(T - order - 1):
                m, c = divmod(m, q)
                digits.append(c)
            yield Element(domain, prefix + tuple(digits))


def _quad_elements_of_norm(domain: DomainSpec, norm: int) -> list[Element]:
    d = domain.d
    out = []
    umax = isqrt(4 * norm)
    vmax = isqrt(4 * norm // (-d)) if d < 0 else 0
    for u in range(-umax, umax + 1):
        for v in range(-vmax, vmax + 1):
            if (u, v) == (0, 0):
                continue
            if domain.half_lattice:
                if (u - v) % 2 != 0:
                    continue
            elif u % 2 != 0 or v % 2 != 0:
                continue
            if (u * u - v * v * d) // 4 == norm:
                out.append(Element(domain, (u, v)))
    return out


@dataclass(frozen=True)
class RefinementTable:
    fn: EuclideanFnSpec
    domain: DomainSpec
    window: Window
    values: tuple[tuple[Element, CertifiedValue], ...]

    @property
    def all_exact(self) -> bool:
        return all(cv.exact for _, cv in self.values)

    def mapping(self) -> dict[Element, CertifiedValue]:
        return dict(self.values)


def refine_function(
    fn: EuclideanFnSpec, domain: DomainSpec, window: Window
) -> RefinementTable:
    """Refined values over every nonzero window element."""
    values = []
    for e in enumerate_nonzero(domain, window):
        values.append((e, refine_eval(fn, e, window=window)))
    return RefinementTable(fn=fn, domain=domain, window=window, values=tuple(values))


@dataclass(frozen=True)
class RefinementReports:
    """Property checks of the refined function, plus the fixed-point
    comparison against the original."""

    table: RefinementTable
    refined_strongly: PropertyReport
    refined_ultra: PropertyReport
    strongly_for_fn: PropertyReport
    fixed_point_holds: bool
    fixed_point_compared: int
    fixed_point_skipped: int
    contradictions: tuple[str, ...]


class _RefinedEvaluator:
    """Pointwise exact refined values, with a cache.

    Raises UpperBoundValue where no exact certificate exists so that
    pair scans quarantine the pair instead of trusting a bound.
    """

    def __init__(self, fn: EuclideanFnSpec, window: Window):
        self.fn = fn
        self.window = window
        self._cache: dict[Element, CertifiedValue] = {}

    def __call__(self, e: Element) -> int:
        cv = self._cache.get(e)
        if cv is None:
            cv = refine_eval(self.fn, e, window=self.window)
            self._cache[e] = cv
        if not cv.exact:
            raise UpperBoundValue(f"refined value at {e!r} is only an upper bound")
        return cv.value


def check_refinement_properties(
    fn: EuclideanFnSpec, domain: DomainSpec, window: Window
) -> RefinementReports:
    """Check the refined function's growth and ultrametric behavior and
    the fixed-point equivalence against the original function.

    Pairs involving inexact refined values count as skipped, never as
    evidence: a false claim about the refinement would overstate what
    the bounded search can see.
    """
    table = refine_function(fn, domain, window)
    elems = enumerate_nonzero(domain, window)
    exhaustive = window_covers_domain(domain, window)
    value_of = _RefinedEvaluator(fn, window)
    for e, cv in table.values:
        value_of._cache[e] = cv

    def report(prop: PropertyKind, scan) -> PropertyReport:
        witnesses, checked, skipped = scan(value_of, elems)
        witness = witnesses[0] if witnesses else None
        return PropertyReport(
            property=prop,
            domain=domain,
            fn=fn,
            window=window,
            verdict=_final_verdict(witness, skipped, exhaustive),
            witness=witness,
            pairs_checked=checked,
            pairs_skipped=skipped,
            refined=True,
        )

    refined_strongly = report(PropertyKind.STRONGLY_EUCLIDEAN, scan_strongly)
    refined_ultra = report(PropertyKind.ULTRA_EUCLIDEAN, scan_ultra)
    strongly_for_fn = check_property(
        PropertyKind.STRONGLY_EUCLIDEAN, fn, domain, window
    )

    holds = True
    compared = skipped = 0
    for e, cv in table.values:
        if not cv.exact:
            skipped += 1
            continue
        try:
            original = evaluate(fn, e)
        except (PrecisionExhausted, RangeExceeded):
            skipped += 1
            continue
        compared += 1
        if cv.value != original:
            holds = False

    contradictions = []
    if strongly_for_fn.verdict is Verdict.EXHAUSTIVELY_VERIFIED and not holds:
        contradictions.append(
            "growth exhaustively verified but the refinement moved a value"
        )
    if strongly_for_fn.verdict is Verdict.VIOLATED and holds and compared:
        w = strongly_for_fn.witness
        if w is not None:
            a = w.elements[0]
            cv = table.mapping().get(a)
            if cv is not None and cv.exact:
                contradictions.append(
                    "growth violated yet the refinement is a fixed point at "
                    "the witness"
                )
    return RefinementReports(
        table=table,
        refined_strongly=refined_strongly,
        refined_ultra=refined_ultra,
        strongly_for_fn=strongly_for_fn,
        fixed_point_holds=holds,
        fixed_point_compared=compared,
        fixed_point_skipped=skipped,
        contradictions=tuple(contradictions),
    )
