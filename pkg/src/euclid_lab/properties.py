"""Windowed and exhaustive checkers for the division-theoretic
predicates, the unit lemmas, and the cross-predicate theorem matrix.

Verdicts are three-valued.  A violation witness is globally valid (a
single concrete pair refutes a universal claim), while the absence of
violations is only meaningful relative to the window unless the window
provably covers the whole domain (finite fields, or all residues of a
series ring at its precision).  Conflating those two would overstate
what a finite scan can establish, so the distinction is kept explicit
everywhere.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum

from .division import (
    CandidateDivision,
    candidate_division,
    canonical_divide,
    enumerate_valid_divisions,
)
from .domains import (
    DomainSpec,
    Element,
    Window,
    enumerate_nonzero,
    units_in_window,
    window_covers_domain,
)
from .errors import (
    EuclidLabError,
    EvalAtZero,
    PrecisionExhausted,
    RangeExceeded,
    UpperBoundValue,
)
from .functions import EuclideanFnSpec, evaluate

_SKIP = (PrecisionExhausted, RangeExceeded, UpperBoundValue)


class PropertyKind(Enum):
    EUCLIDEAN = "euclidean"
    STRONGLY_EUCLIDEAN = "strongly_euclidean"
    ULTRA_EUCLIDEAN = "ultra_euclidean"
    UNIQUELY_EUCLIDEAN = "uniquely_euclidean"
    UNIT_EQUALITY = "unit_equality"
    MIN_AT_UNITS = "min_at_units"
    UNIT_FIELD_CLOSURE = "unit_field_closure"


class Verdict(Enum):
    VIOLATED = "violated"
    NO_VIOLATION_FOUND = "no_violation_found"
    EXHAUSTIVELY_VERIFIED = "exhaustively_verified"
    NOT_APPLICABLE = "not_applicable"


@dataclass(frozen=True)
class Witness:
    elements: tuple[Element, ...]
    values: tuple[int, ...]
    note: str
    divisions: tuple[CandidateDivision, ...] = ()


@dataclass(frozen=True)
class PropertyReport:
    property: PropertyKind
    domain: DomainSpec
    fn: EuclideanFnSpec | None
    window: Window
    verdict: Verdict
    witness: Witness | None
    pairs_checked: int
    pairs_skipped: int
    all_witnesses: tuple[Witness, ...] = ()
    refined: bool = False    # True when the check ran on the refinement of fn


def _final_verdict(
    witness: Witness | None, skipped: int, exhaustive_capable: bool
) -> Verdict:
    if witness is not None:
        return Verdict.VIOLATED
    if exhaustive_capable and skipped == 0:
        return Verdict.EXHAUSTIVELY_VERIFIED
    return Verdict.NO_VIOLATION_FOUND


# ---------------------------------------------------------------------------
# generic pair scans, reused by the refinement engine
# ---------------------------------------------------------------------------


def scan_strongly(value_of, elems):
    """Check value_of(a) <= value_of(a*b) over all ordered pairs.

    ``value_of`` may raise PrecisionExhausted or RangeExceeded to skip
    a pair.  Returns (witnesses, checked, skipped).
    """
    witnesses = []
    checked = skipped = 0
    for a, b in itertools.product(elems, repeat=2):
        checked += 1
        try:
            fa = value_of(a)
            fab = value_of(a * b)
        except _SKIP:
            skipped += 1
            continue
        if fa > fab:
            witnesses.append(
                Witness(
                    elements=(a, b),
                    values=(fa, fab),
                    note="size of a exceeds size of a*b",
                )
            )
    return witnesses, checked, skipped


def scan_ultra(value_of, elems):
    """Check value_of(a+b) <= max(value_of(a), value_of(b)) whenever
    a + b is nonzero."""
    witnesses = []
    checked = skipped = 0
    for a, b in itertools.product(elems, repeat=2):
        s = a + b
        if s.is_zero():
            continue
        checked += 1
        try:
            fa = value_of(a)
            fb = value_of(b)
            fs = value_of(s)
        except _SKIP:
            skipped += 1
            continue
        if fs > max(fa, fb):
            witnesses.append(
                Witness(
                    elements=(a, b),
                    values=(fa, fb, fs),
                    note="size of a+b exceeds max(size a, size b)",
                )
            )
    return witnesses, checked, skipped


# ---------------------------------------------------------------------------
# the four predicates
# ---------------------------------------------------------------------------


def check_property(
    prop: PropertyKind,
    fn: EuclideanFnSpec,
    domain: DomainSpec,
    window: Window,
    all_violations: bool = False,
) -> PropertyReport:
    """Scan the window for violations of one predicate.

    Pairs iterate in the deterministic product order of the canonical
    element enumeration; the first violation is the canonical witness.
    Pairs whose verdict cannot be decided at the working precision (or
    within a phi table's range) are counted as skipped.
    """
    if not fn.compatible_with(domain):
        raise EuclidLabError(f"{fn.label()} is not usable on {domain.label()}")
    elems = enumerate_nonzero(domain, window)
    exhaustive = window_covers_domain(domain, window)

    def value_of(e: Element) -> int:
        return evaluate(fn, e)

    if prop is PropertyKind.STRONGLY_EUCLIDEAN:
        witnesses, checked, skipped = scan_strongly(value_of, elems)
    elif prop is PropertyKind.ULTRA_EUCLIDEAN:
        witnesses, checked, skipped = scan_ultra(value_of, elems)
    elif prop is PropertyKind.EUCLIDEAN:
        witnesses, checked, skipped = _scan_euclidean(fn, domain, window, elems)
    elif prop is PropertyKind.UNIQUELY_EUCLIDEAN:
        witnesses, checked, skipped = _scan_uniquely(fn, domain, window, elems)
    else:
        raise EuclidLabError(f"{prop} is not handled by check_property")
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
        all_witnesses=tuple(witnesses) if all_violations else (),
    )


def _scan_euclidean(fn, domain, window, elems):
    witnesses = []
    checked = skipped = 0
    for a, b in itertools.product(elems, repeat=2):
        checked += 1
        found = False
        try:
            q, r = canonical_divide(domain, a, b)
            found = candidate_division(fn, a, b, q, r).valid
        except _SKIP + (EvalAtZero,):
            found = False
        if found:
            continue
        try:
            result = enumerate_valid_divisions(fn, a, b, window=window)
        except _SKIP:
            skipped += 1
            continue
        if result.divisions:
            continue
        if result.complete:
            witnesses.append(
                Witness(elements=(a, b), values=(), note="no valid division exists")
            )
        else:
            skipped += 1
    return witnesses, checked, skipped


def _scan_uniquely(fn, domain, window, elems):
    witnesses = []
    checked = skipped = 0
    for a, b in itertools.product(elems, repeat=2):
        checked += 1
        try:
            result = enumerate_valid_divisions(fn, a, b, window=window)
        except _SKIP:
            skipped += 1
            continue
        count = len(result.divisions)
        if count >= 2 or (result.complete and count != 1):
            witnesses.append(
                Witness(
                    elements=(a, b),
                    values=(count,),
                    note=f"{count} valid divisions, expected exactly 1",
                    divisions=result.divisions,
                )
            )
        elif not result.complete:
            skipped += 1
    return witnesses, checked, skipped


# ---------------------------------------------------------------------------
# unit lemmas
# ---------------------------------------------------------------------------


def check_unit_lemmas(
    fn: EuclideanFnSpec, domain: DomainSpec, window: Window
) -> tuple[PropertyReport, PropertyReport]:
    """Unit-related consequences of multiplicative growth.

    Returns two reports: size equality f(a) = f(ab) holding exactly for
    unit b, and the minimum of f being attained exactly at the units.
    Both are only meaningful under a function with no multiplicative
    growth violation on the window; otherwise they come back marked
    not-applicable.
    """
    strongly = check_property(PropertyKind.STRONGLY_EUCLIDEAN, fn, domain, window)
    if strongly.verdict is Verdict.VIOLATED:

        def not_applicable(prop: PropertyKind) -> PropertyReport:
            return PropertyReport(
                property=prop,
                domain=domain,
                fn=fn,
                window=window,
                verdict=Verdict.NOT_APPLICABLE,
                witness=None,
                pairs_checked=0,
                pairs_skipped=0,
            )

        return (
            not_applicable(PropertyKind.UNIT_EQUALITY),
            not_applicable(PropertyKind.MIN_AT_UNITS),
        )

    elems = enumerate_nonzero(domain, window)
    exhaustive = window_covers_domain(domain, window)

    eq_witnesses = []
    checked = skipped = 0
    for a, b in itertools.product(elems, repeat=2):
        checked += 1
        try:
            fa = evaluate(fn, a)
            fab = evaluate(fn, a * b)
        except _SKIP:
            skipped += 1
            continue
        unit = b.is_unit()
        if (fa == fab) != unit:
            note = (
                "size preserved by a non-unit factor"
                if fa == fab
                else "size changed by a unit factor"
            )
            eq_witnesses.append(Witness(elements=(a, b), values=(fa, fab), note=note))
            break
    eq_witness = eq_witnesses[0] if eq_witnesses else None
    equality = PropertyReport(
        property=PropertyKind.UNIT_EQUALITY,
        domain=domain,
        fn=fn,
        window=window,
        verdict=_final_verdict(eq_witness, skipped, exhaustive),
        witness=eq_witness,
        pairs_checked=checked,
        pairs_skipped=skipped,
    )

    min_witness = None
    checked = skipped = 0
    values = []
    for e in elems:
        checked += 1
        try:
            values.append((evaluate(fn, e), e))
        except _SKIP:
            skipped += 1
    units = set(units_in_window(domain, window))
    if values:
        m = min(v for v, _ in values)
        for v, e in values:
            attains = v == m
            if attains != (e in units):
                note = (
                    "minimum attained at a non-unit"
                    if attains
                    else "unit above the minimum"
                )
                min_witness = Witness(elements=(e,), values=(v, m), note=note)
                break
    minimum = PropertyReport(
        property=PropertyKind.MIN_AT_UNITS,
        domain=domain,
        fn=fn,
        window=window,
        verdict=_final_verdict(min_witness, skipped, exhaustive),
        witness=min_witness,
        pairs_checked=checked,
        pairs_skipped=skipped,
    )
    return equality, minimum


def unit_field_closure(domain: DomainSpec, window: Window) -> PropertyReport:
    """Is the set of units (plus zero) closed under addition?

    Holds whenever units-with-zero form a field; fails in rings such as
    the integers where 1 + 1 = 2 is not a unit.
    """
    units = units_in_window(domain, window)
    exhaustive = window_covers_domain(domain, window)
    witness = None
    checked = 0
    for u, v in itertools.product(units, repeat=2):
        s = u + v
        if s.is_zero():
            continue
        checked += 1
        if not s.is_unit():
            witness = Witness(
                elements=(u, v, s), values=(), note="sum of units is not a unit"
            )
            break
    return PropertyReport(
        property=PropertyKind.UNIT_FIELD_CLOSURE,
        domain=domain,
        fn=None,
        window=window,
        verdict=_final_verdict(witness, 0, exhaustive),
        witness=witness,
        pairs_checked=checked,
        pairs_skipped=0,
    )


# ---------------------------------------------------------------------------
# witness replay
# ---------------------------------------------------------------------------


def replay_witness(report: PropertyReport) -> bool:
    """Re-derive a violation from raw arithmetic.

    Every VIOLATED report must replay successfully; anything else is an
    engine bug.
    """
    if report.verdict is not Verdict.VIOLATED or report.witness is None:
        return False
    w = report.witness
    fn = report.fn
    prop = report.property
    if prop is PropertyKind.STRONGLY_EUCLIDEAN:
        a, b = w.elements
        return evaluate(fn, a) > evaluate(fn, a * b)
    if prop is PropertyKind.ULTRA_EUCLIDEAN:
        a, b = w.elements
        s = a + b
        return not s.is_zero() and evaluate(fn, s) > max(
            evaluate(fn, a), evaluate(fn, b)
        )
    if prop is PropertyKind.EUCLIDEAN:
        a, b = w.elements
        result = enumerate_valid_divisions(fn, a, b, window=report.window)
        return result.complete and not result.divisions
    if prop is PropertyKind.UNIQUELY_EUCLIDEAN:
        a, b = w.elements
        result = enumerate_valid_divisions(fn, a, b, window=report.window)
        if len(result.divisions) != w.values[0]:
            return False
        ok = all(
            candidate_division(fn, a, b, d.q, d.r).valid for d in result.divisions
        )
        return ok and (len(result.divisions) >= 2 or result.complete)
    if prop is PropertyKind.UNIT_EQUALITY:
        a, b = w.elements
        return (evaluate(fn, a) == evaluate(fn, a * b)) != b.is_unit()
    if prop is PropertyKind.MIN_AT_UNITS:
        (e,) = w.elements
        value, minimum = w.values
        return evaluate(fn, e) == value and (value == minimum) != e.is_unit()
    if prop is PropertyKind.UNIT_FIELD_CLOSURE:
        u, v, s = w.elements
        return u.is_unit() and v.is_unit() and u + v == s and not s.is_unit()
    return False


# ---------------------------------------------------------------------------
# theorem matrix
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MatrixReport:
    """The four predicate verdicts plus verdict-level consistency flags."""

    euclidean: PropertyReport
    strongly: PropertyReport
    ultra: PropertyReport
    uniquely: PropertyReport
    contradictions: tuple[str, ...] = field(default=())
    inconclusive: tuple[str, ...] = field(default=())
    derived_witness_note: str | None = None

    @property
    def consistent(self) -> bool:
        return not self.contradictions

    def reports(self) -> tuple[PropertyReport, ...]:
        return (self.euclidean, self.strongly, self.ultra, self.uniquely)


def _decided(rep: PropertyReport) -> bool:
    return rep.verdict in (Verdict.VIOLATED, Verdict.EXHAUSTIVELY_VERIFIED)


def _holds(rep: PropertyReport) -> bool:
    return rep.verdict is Verdict.EXHAUSTIVELY_VERIFIED


def theorem_matrix(
    fn: EuclideanFnSpec, domain: DomainSpec, window: Window
) -> MatrixReport:
    """Run all four predicate checks and cross-validate their verdicts.

    Uniqueness must match the conjunction of multiplicative growth and
    the ultrametric bound wherever all three verdicts are decided; a
    mismatch is flagged as a contradiction, which the test suite treats
    as an engine bug.  Windowed combinations that a theorem cannot
    settle are reported as inconclusive, never as contradictions.
    """
    euclidean = check_property(PropertyKind.EUCLIDEAN, fn, domain, window)
    strongly = check_property(PropertyKind.STRONGLY_EUCLIDEAN, fn, domain, window)
    ultra = check_property(PropertyKind.ULTRA_EUCLIDEAN, fn, domain, window)
    uniquely = check_property(PropertyKind.UNIQUELY_EUCLIDEAN, fn, domain, window)

    contradictions: list[str] = []
    inconclusive: list[str] = []

    if euclidean.verdict is Verdict.VIOLATED:
        inconclusive.append(
            "function is not Euclidean on the window; the biconditional "
            "is not evaluated"
        )
    else:
        s_false = strongly.verdict is Verdict.VIOLATED
        u_false = ultra.verdict is Verdict.VIOLATED
        q_false = uniquely.verdict is Verdict.VIOLATED
        if _decided(strongly) and _decided(ultra) and _decided(uniquely):
            if _holds(uniquely) != (_holds(strongly) and _holds(ultra)):
                contradictions.append(
                    "unique division does not match growth-and-ultrametric "
                    "on an exhaustively decided configuration"
                )
        else:
            if _holds(uniquely) and (s_false or u_false):
                contradictions.append(
                    "unique division exhaustively verified while a premise "
                    "is violated"
                )
            if q_false and _holds(strongly) and _holds(ultra):
                contradictions.append(
                    "unique division violated while growth and ultrametric "
                    "are exhaustively verified"
                )
            if (s_false or u_false) and uniquely.verdict is Verdict.NO_VIOLATION_FOUND:
                inconclusive.append(
                    "a premise is violated but no uniqueness violation "
                    "appeared in the window; uniqueness may fail outside it"
                )

    derived_note = None
    if (
        ultra.verdict is Verdict.VIOLATED
        and uniquely.verdict is Verdict.VIOLATED
        and ultra.witness is not None
        and uniquely.witness is not None
    ):
        a, b = ultra.witness.elements
        if uniquely.witness.elements == (a, a + b):
            derived_note = (
                "the non-uniqueness witness is the sum-derived pair of the "
                "ultrametric witness"
            )

    return MatrixReport(
        euclidean=euclidean,
        strongly=strongly,
        ultra=ultra,
        uniquely=uniquely,
        contradictions=tuple(contradictions),
        inconclusive=tuple(inconclusive),
        derived_witness_note=derived_note,
    )
