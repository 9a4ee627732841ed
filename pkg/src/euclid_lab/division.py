"""Candidate divisions: construction, validation, enumeration, gcd,
and the base-power decomposition.

A candidate division of a by b is any (q, r) with a = q*b + r.  It is
valid under a size function f when r = 0 or f(r) < f(b).  Enumeration
is remainder-first: walk the sublevel set {r : f(r) < f(b)} plus zero,
and solve for the unique quotient (at most one exists in an integral
domain).  The sublevel set is derived exactly whenever the function's
structure allows it; otherwise a caller-supplied window bounds the
search and the result is marked incomplete.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .domains import (
    DomainKind,
    DomainSpec,
    Element,
    Window,
    enumerate_nonzero,
    series_inverse_unit,
    series_quotient,
)
from .errors import (
    DivisionByZero,
    EuclidLabError,
    EvalAtZero,
    IdentityFails,
    NoDescent,
    NonUniqueStep,
    NonUnitRemainder,
    PrecisionExhausted,
    RangeExceeded,
    WindowRequired,
)
from .functions import EuclideanFnSpec, FnKind, evaluate

# enumerating a derivable sublevel set beyond this many elements is
# treated as "not derivable in practice" and falls back to windows
SUBLEVEL_CAP = 1 << 20


@dataclass(frozen=True)
class CandidateDivision:
    a: Element
    b: Element
    q: Element
    r: Element
    valid: bool

    def pair(self) -> tuple[Element, Element]:
        return (self.q, self.r)


@dataclass(frozen=True)
class EnumerationResult:
    divisions: tuple[CandidateDivision, ...]
    complete: bool
    skipped: int


@dataclass(frozen=True)
class Decomposition:
    """a = sum(coefficients[i] * base**i), every coefficient 0 or a unit."""

    base: Element
    coefficients: tuple[Element, ...]

    def reconstruct(self) -> Element:
        acc = self.base.domain.zero()
        for c in reversed(self.coefficients):
            acc = acc * self.base + c
        return acc


def candidate_division(
    fn: EuclideanFnSpec, a: Element, b: Element, q: Element, r: Element
) -> CandidateDivision:
    """Build a candidate division, checking the identity a = q*b + r."""
    if q * b + r != a:
        raise IdentityFails(f"{a!r} != {q!r} * {b!r} + {r!r}")
    valid = r.is_zero() or evaluate(fn, r) < evaluate(fn, b)
    return CandidateDivision(a=a, b=b, q=q, r=r, valid=valid)


def is_valid_division(
    fn: EuclideanFnSpec, a: Element, b: Element, q: Element, r: Element
) -> bool:
    if b.is_zero():
        raise DivisionByZero("division by zero")
    return candidate_division(fn, a, b, q, r).valid


# ---------------------------------------------------------------------------
# canonical division
# ---------------------------------------------------------------------------


def _round_tie_toward_zero(x: Fraction) -> int:
    q, rem = divmod(x.numerator, x.denominator)
    double = 2 * rem
    if double < x.denominator:
        return q
    if double > x.denominator:
        return q + 1
    return q + 1 if x < 0 else q


def _nearest_with_parity(x: Fraction, parity: int) -> int:
    c = x.numerator // x.denominator
    best = None
    for n in range(c - 2, c + 3):
        if n % 2 != parity % 2:
            continue
        key = (abs(n - x), abs(n), n < 0)
        if best is None or key < best[0]:
            best = (key, n)
    return best[1]


def _poly_divmod(dom: DomainSpec, a: tuple, b: tuple) -> tuple[tuple, tuple]:
    t = dom.tables()
    rem = list(a)
    db = len(b) - 1
    lead_inv = t.inv[b[-1]]
    q = [0] * max(0, len(rem) - db)
    while len(rem) >= len(b):
        factor = t.mul[rem[-1]][lead_inv]
        shift = len(rem) - len(b)
        q[shift] = factor
        for i, c in enumerate(b):
            if c:
                rem[shift + i] = t.add[rem[shift + i]][t.neg[t.mul[factor][c]]]
        while rem and rem[-1] == 0:
            rem.pop()
    return tuple(q), tuple(rem)


def canonical_divide(
    domain: DomainSpec, a: Element, b: Element
) -> tuple[Element, Element]:
    """One division valid under the domain's default size function.

    Integers take the least non-negative remainder; polynomials use
    long division; quadratic rings round each coordinate of a/b to the
    nearest lattice point with ties toward zero; series divide exactly
    when ord(a) >= ord(b) and otherwise return (0, a).
    """
    if b.domain != a.domain or a.domain != domain:
        raise EuclidLabError("mismatched domains in division")
    k = domain.kind
    if b.is_zero():
        if k is DomainKind.SERIES:
            raise PrecisionExhausted(
                "divisor is 0 mod x^T; quotient not determined at this precision"
            )
        raise DivisionByZero("division by zero")
    if k is DomainKind.INTEGERS:
        r = a.payload % abs(b.payload)
        q = (a.payload - r) // b.payload
        return Element(domain, q), Element(domain, r)
    if k is DomainKind.FINITE_FIELD:
        t = domain.tables()
        q = t.mul[a.payload][t.inv[b.payload]]
        return Element(domain, q), domain.zero()
    if k is DomainKind.POLY:
        qp, rp = _poly_divmod(domain, a.payload, b.payload)
        return domain.element(qp), domain.element(rp)
    if k is DomainKind.SERIES:
        if a.is_zero():
            return domain.zero(), domain.zero()
        if a.order() >= b.order():
            return series_quotient(a, b), domain.zero()
        return domain.zero(), a
    # quadratic: exact rational coordinates of a/b, doubled
    num = a * b.conjugate()
    ns = b.norm_signed()
    tu = Fraction(num.payload[0], ns)
    tv = Fraction(num.payload[1], ns)
    if domain.half_lattice:
        v = _round_tie_toward_zero(tv)
        u = _nearest_with_parity(tu, v)
        q = domain.element((u, v))
    else:
        s = _round_tie_toward_zero(tu / 2)
        t_ = _round_tie_toward_zero(tv / 2)
        q = domain.element((2 * s, 2 * t_))
    return q, a - q * b


# ---------------------------------------------------------------------------
# sublevel sets
# ---------------------------------------------------------------------------


def _counting_index(dom: DomainSpec, payload: tuple) -> int:
    n = 0
    for c in reversed(payload):
        n = n * dom.q + c
    return n


def canonical_key(e: Element):
    """Sort key realizing the canonical small-first element order."""
    k = e.domain.kind
    if k is DomainKind.INTEGERS:
        return (abs(e.payload), e.payload < 0)
    if k is DomainKind.QUADRATIC:
        u, v = e.payload
        return (e.norm(), abs(u), abs(v), u < 0, v < 0)
    if k is DomainKind.FINITE_FIELD:
        return (e.payload,)
    return (_counting_index(e.domain, e.payload),)


def _poly_elements_below_degree(dom: DomainSpec, dmax: int) -> list[Element] | None:
    """Nonzero polynomials of degree < dmax, counting order."""
    if dmax <= 0:
        return []
    count = dom.q**dmax
    if count > SUBLEVEL_CAP:
        return None
    out = []
    for n in range(1, count):
        digits = []
        m = n
        while m:
            m, c = divmod(m, dom.q)
            digits.append(c)
        out.append(Element(dom, tuple(digits)))
    return out


def sublevel_elements(
    fn: EuclideanFnSpec, domain: DomainSpec, bound: int
) -> list[Element] | None:
    """All nonzero r with f(r) < bound, or None when not derivable.

    Derivable by construction: absolute value (a magnitude range),
    degree and phi-of-degree over a finite coefficient field, norm
    balls of imaginary quadratic rings, whole finite fields, and full
    residue sets of series rings.  Real quadratic norm balls are
    infinite, so they require a window.
    """
    if bound <= 0:
        return []
    k = fn.kind
    if k is FnKind.ABS_VALUE:
        out = []
        for n in range(1, bound):
            out.append(Element(domain, n))
            out.append(Element(domain, -n))
        return out
    if k is FnKind.DEGREE:
        return _poly_elements_below_degree(domain, bound)
    if k is FnKind.PHI_DEG:
        phi = fn.phi
        if not phi or bound > phi[-1] + 1:
            # elements with degrees beyond the table cannot be ruled out
            return None
        dmax = sum(1 for v in phi if v < bound)
        return _poly_elements_below_degree(domain, dmax)
    if k is FnKind.QUAD_NORM:
        d = domain.d
        if d > 0:
            return None
        umax = isqrt(4 * bound - 1)
        vmax = isqrt((4 * bound - 1) // (-d))
        out = []
        for u in range(-umax, umax + 1):
            for v in range(-vmax, vmax + 1):
                if (u, v) == (0, 0):
                    continue
                if domain.half_lattice:
                    if (u - v) % 2 != 0:
                        continue
                elif u % 2 != 0 or v % 2 != 0:
                    continue
                if (u * u - v * v * d) // 4 < bound:
                    out.append(Element(domain, (u, v)))
        out.sort(key=canonical_key)
        return out
    if k is FnKind.ORDER:
        T = domain.precision
        if domain.q**T > SUBLEVEL_CAP:
            return None
        cut = min(bound, T)
        out = []
        for e in enumerate_nonzero(domain, Window.whole()):
            if e.order() < cut:
                out.append(e)
        return out
    if k is FnKind.FIELD_TABLE:
        out = [e for e, v in fn.table if v < bound and not e.is_zero()]
        out.sort(key=canonical_key)
        return out
    # exception table: adjust the base sublevel by the overridden points
    base = sublevel_elements(fn.base, domain, bound)
    if base is None:
        return None
    overridden = fn.exception_map
    out = [r for r in base if r not in overridden]
    out.extend(e for e, v in fn.exceptions if v < bound and not e.is_zero())
    out.sort(key=canonical_key)
    return out


# ---------------------------------------------------------------------------
# exact quotients
# ---------------------------------------------------------------------------


def exact_quotient(c: Element, b: Element) -> Element | None:
    """The unique q with c = q*b, or None when b does not divide c."""
    dom = c.domain
    k = dom.kind
    if k is DomainKind.INTEGERS:
        q, r = divmod(c.payload, b.payload)
        return Element(dom, q) if r == 0 else None
    if k is DomainKind.FINITE_FIELD:
        t = dom.tables()
        return Element(dom, t.mul[c.payload][t.inv[b.payload]])
    if k is DomainKind.POLY:
        if not c.payload:
            return dom.zero()
        qp, rp = _poly_divmod(dom, c.payload, b.payload)
        return dom.element(qp) if rp == () else None
    if k is DomainKind.SERIES:
        if c.is_zero():
            return dom.zero()
        if c.order() < b.order():
            return None
        return series_quotient(c, b)
    num = c * b.conjugate()
    ns = b.norm_signed()
    pu, pv = num.payload
    if pu % ns or pv % ns:
        return None
    u, v = pu // ns, pv // ns
    if dom.half_lattice:
        if (u - v) % 2 != 0:
            return None
    elif u % 2 != 0 or v % 2 != 0:
        return None
    q = Element(dom, (u, v))
    return q if q * b == c else None


# ---------------------------------------------------------------------------
# enumeration of valid divisions
# ---------------------------------------------------------------------------


def enumerate_valid_divisions(
    fn: EuclideanFnSpec,
    a: Element,
    b: Element,
    window: Window | None = None,
) -> EnumerationResult:
    """Every valid division of a by b, remainder-first.

    When the sublevel set of f below f(b) is derivable the listing is
    complete over the whole domain; otherwise remainder candidates come
    from the window and the result is marked incomplete.
    """
    dom = a.domain
    if b.domain != dom:
        raise EuclidLabError("mismatched domains in enumeration")
    if b.is_zero():
        if dom.kind is DomainKind.SERIES:
            raise PrecisionExhausted(
                "divisor is 0 mod x^T; divisions not determined at this precision"
            )
        raise DivisionByZero("division by zero")
    bound = evaluate(fn, b)
    skipped = 0
    candidates = sublevel_elements(fn, dom, bound)
    complete = candidates is not None
    if candidates is None:
        if window is None:
            raise WindowRequired(
                f"sublevel set of {fn.label()} below {bound} is not derivable"
            )
        candidates = []
        for r in enumerate_nonzero(dom, window):
            try:
                if evaluate(fn, r) < bound:
                    candidates.append(r)
            except (PrecisionExhausted, RangeExceeded, EvalAtZero):
                skipped += 1
    divisions = []
    q0 = exact_quotient(a, b)
    if q0 is not None:
        divisions.append(candidate_division(fn, a, b, q0, dom.zero()))
    for r in candidates:
        q = exact_quotient(a - r, b)
        if q is not None:
            divisions.append(candidate_division(fn, a, b, q, r))
    return EnumerationResult(
        divisions=tuple(divisions), complete=complete, skipped=skipped
    )


# ---------------------------------------------------------------------------
# extended gcd
# ---------------------------------------------------------------------------

_IMAGINARY_UNIT_PAYLOADS = {
    -1: ((2, 0), (-2, 0), (0, 2), (0, -2)),
    -3: ((2, 0), (-2, 0), (1, 1), (-1, -1), (1, -1), (-1, 1)),
}

_FUNDAMENTAL_UNIT_PAYLOADS = {2: (2, 2), 3: (4, 2)}


def _quad_units(dom: DomainSpec) -> list[Element]:
    payloads = _IMAGINARY_UNIT_PAYLOADS.get(dom.d, ((2, 0), (-2, 0)))
    return [Element(dom, p) for p in payloads]


def _normalize_quadratic(dom: DomainSpec, g: Element) -> Element:
    """Canonical associate: minimal under the canonical element order."""
    if dom.d < 0:
        return min((g * u for u in _quad_units(dom)), key=canonical_key)
    eps = Element(dom, _FUNDAMENTAL_UNIT_PAYLOADS[dom.d])
    eps_inv = eps.conjugate()
    if (eps * eps_inv).payload != (2, 0):
        eps_inv = -eps_inv
    best = g
    while canonical_key(eps * best) < canonical_key(best):
        best = eps * best
    while canonical_key(eps_inv * best) < canonical_key(best):
        best = eps_inv * best
    # guard against plateaus of the key: scan a few unit powers around
    # the descent endpoint and both signs
    scan = [best]
    fwd = bwd = best
    for _ in range(4):
        fwd = eps * fwd
        bwd = eps_inv * bwd
        scan.extend((fwd, bwd))
    scan.extend([-e for e in list(scan)])
    return min(scan, key=canonical_key)


def gcd_extended(
    domain: DomainSpec, a: Element, b: Element
) -> tuple[Element, Element, Element]:
    """Normalized g with g = s*a + t*b, by iterated canonical division.

    Normal forms: positive for integers, monic for polynomials, the
    multiplicative identity for fields, a power of x for series, and
    the canonically least associate for quadratic rings.
    """
    if a.is_zero() and b.is_zero():
        raise EuclidLabError("gcd(0, 0) is undefined")
    one, zero = domain.one(), domain.zero()
    r0, r1 = a, b
    s0, s1 = one, zero
    t0, t1 = zero, one
    while not r1.is_zero():
        q, r = canonical_divide(domain, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    g, s, t = r0, s0, t0
    k = domain.kind
    if k is DomainKind.INTEGERS:
        if g.payload < 0:
            g, s, t = -g, -s, -t
    elif k is DomainKind.FINITE_FIELD:
        tab = domain.tables()
        c = Element(domain, tab.inv[g.payload])
        g, s, t = g * c, s * c, t * c
    elif k is DomainKind.POLY:
        tab = domain.tables()
        c = domain.element((tab.inv[g.payload[-1]],))
        g, s, t = g * c, s * c, t * c
    elif k is DomainKind.SERIES:
        ordg = g.order()
        unit_part = domain.element(g.payload[ordg:] + (0,) * ordg)
        c = series_inverse_unit(unit_part)
        g, s, t = g * c, s * c, t * c
    else:
        target = _normalize_quadratic(domain, g)
        u = exact_quotient(target, g)
        g, s, t = target, s * u, t * u
    if s * a + t * b != g:
        raise EuclidLabError("internal error: Bezout identity failed to verify")
    return g, s, t


# ---------------------------------------------------------------------------
# base-power decomposition
# ---------------------------------------------------------------------------


def decompose_by(fn: EuclideanFnSpec, a: Element, base: Element) -> Decomposition:
    """Write a as a polynomial in ``base`` with unit-or-zero coefficients.

    Each step divides the running quotient by ``base``, demanding a
    unique valid division whose remainder is zero or a unit, and whose
    quotient strictly shrinks under f.  The strict descent is what
    guarantees termination, so it is enforced at runtime.
    """
    if base.is_zero() or base.is_unit():
        raise EuclidLabError("decomposition base must be a nonzero non-unit")
    if a.is_zero():
        return Decomposition(base=base, coefficients=())
    coefficients: list[Element] = []
    cur = a
    while True:
        result = enumerate_valid_divisions(fn, cur, base)
        if not result.complete:
            raise WindowRequired("decomposition needs a complete enumeration")
        if len(result.divisions) != 1:
            raise NonUniqueStep(cur, len(result.divisions))
        q, r = result.divisions[0].pair()
        if not (r.is_zero() or r.is_unit()):
            raise NonUnitRemainder(r)
        coefficients.append(r)
        if q.is_zero():
            break
        size_cur = evaluate(fn, cur)
        size_q = evaluate(fn, q)
        if size_q >= size_cur:
            raise NoDescent(cur, size_cur, size_q)
        cur = q
    decomp = Decomposition(base=base, coefficients=tuple(coefficients))
    if decomp.reconstruct() != a:
        raise EuclidLabError("internal error: decomposition failed to reconstruct")
    return decomp
