"""Exact arithmetic and bounded enumeration for the concrete rings.

Five families of integral domains are supported, each with an exact
payload representation:

* ``INTEGERS``            -- arbitrary-precision ``int``.
* ``QUADRATIC`` (d)       -- doubled coordinates ``(u, v)`` meaning
  ``(u + v*sqrt(d)) / 2``.  For d = 1 (mod 4) the half-integer lattice
  requires ``u = v (mod 2)``; otherwise both coordinates are even.
  This keeps every element, product, and norm an exact integer.
* ``FINITE_FIELD`` (q)    -- index into a field table; GF(4) uses the
  basis {1, alpha} with alpha^2 = alpha + 1 (indices 0, 1, 2, 3 stand
  for 0, 1, alpha, beta = alpha + 1).
* ``POLY`` (q)            -- coefficient tuple, lowest degree first, no
  trailing zeros; the empty tuple is zero.
* ``SERIES`` (q, T)       -- coefficient tuple of length exactly T.
  Payloads are read as exact polynomials of degree < T standing for
  themselves as power series; multiplication truncates, so a zero
  product of nonzero factors means "not determined at this precision",
  never "ring-level zero".  Operations that would need the order of
  such a value raise :class:`PrecisionExhausted`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterator

from .errors import DomainMismatch, EuclidLabError, EvalAtZero, PrecisionExhausted

ALLOWED_D = (-11, -7, -3, -2, -1, 2, 3)
ALLOWED_Q = (2, 3, 4, 5, 7)


class DomainKind(Enum):
    INTEGERS = "integers"
    QUADRATIC = "quadratic"
    FINITE_FIELD = "finite_field"
    POLY = "poly"
    SERIES = "series"


@dataclass(frozen=True)
class FieldTables:
    """Dense operation tables for GF(q), q in {2, 3, 4, 5, 7}."""

    q: int
    add: tuple[tuple[int, ...], ...]
    mul: tuple[tuple[int, ...], ...]
    neg: tuple[int, ...]
    inv: tuple[int, ...]  # inv[0] unused


def _gf4_mul(i: int, j: int) -> int:
    # elements are i0 + i1*alpha with alpha^2 = alpha + 1
    i0, i1 = i & 1, i >> 1
    j0, j1 = j & 1, j >> 1
    c0 = (i0 * j0 + i1 * j1) & 1
    c1 = (i0 * j1 + i1 * j0 + i1 * j1) & 1
    return c0 | (c1 << 1)


@lru_cache(maxsize=None)
def field_tables(q: int) -> FieldTables:
    if q not in ALLOWED_Q:
        raise EuclidLabError(f"unsupported field size {q}; allowed: {ALLOWED_Q}")
    if q == 4:
        add = tuple(tuple(i ^ j for j in range(4)) for i in range(4))
        mul = tuple(tuple(_gf4_mul(i, j) for j in range(4)) for i in range(4))
        neg = (0, 1, 2, 3)
    else:
        add = tuple(tuple((i + j) % q for j in range(q)) for i in range(q))
        mul = tuple(tuple((i * j) % q for j in range(q)) for i in range(q))
        neg = tuple((-i) % q for i in range(q))
    inv = [0] * q
    for i in range(1, q):
        for j in range(1, q):
            if mul[i][j] == 1:
                inv[i] = j
                break
    return FieldTables(q=q, add=add, mul=mul, neg=neg, inv=tuple(inv))


@dataclass(frozen=True)
class DomainSpec:
    """Identifies a concrete integral domain and its parameters."""

    kind: DomainKind
    d: int | None = None
    q: int | None = None
    precision: int | None = None

    def __post_init__(self) -> None:
        if self.kind is DomainKind.INTEGERS:
            if (self.d, self.q, self.precision) != (None, None, None):
                raise EuclidLabError("integers take no parameters")
        elif self.kind is DomainKind.QUADRATIC:
            if self.d not in ALLOWED_D:
                raise EuclidLabError(f"d must be one of {ALLOWED_D}, got {self.d}")
            if (self.q, self.precision) != (None, None):
                raise EuclidLabError("quadratic rings take only d")
        elif self.kind in (DomainKind.FINITE_FIELD, DomainKind.POLY):
            if self.q not in ALLOWED_Q:
                raise EuclidLabError(f"q must be one of {ALLOWED_Q}, got {self.q}")
            if (self.d, self.precision) != (None, None):
                raise EuclidLabError(f"{self.kind.value} takes only q")
        elif self.kind is DomainKind.SERIES:
            if self.q not in ALLOWED_Q:
                raise EuclidLabError(f"q must be one of {ALLOWED_Q}, got {self.q}")
            if self.precision is None or self.precision < 2:
                raise EuclidLabError("series precision must be at least 2")
            if self.d is not None:
                raise EuclidLabError("series rings take q and precision only")

    # -- constructors ------------------------------------------------

    @staticmethod
    def integers() -> "DomainSpec":
        return DomainSpec(DomainKind.INTEGERS)

    @staticmethod
    def quadratic(d: int) -> "DomainSpec":
        return DomainSpec(DomainKind.QUADRATIC, d=d)

    @staticmethod
    def finite_field(q: int) -> "DomainSpec":
        return DomainSpec(DomainKind.FINITE_FIELD, q=q)

    @staticmethod
    def poly(q: int) -> "DomainSpec":
        return DomainSpec(DomainKind.POLY, q=q)

    @staticmethod
    def series(q: int, precision: int) -> "DomainSpec":
        return DomainSpec(DomainKind.SERIES, q=q, precision=precision)

    # -- basic properties --------------------------------------------

    @property
    def half_lattice(self) -> bool:
        """True when the quadratic ring uses Z[(1+sqrt(d))/2]."""
        return self.kind is DomainKind.QUADRATIC and self.d % 4 == 1

    @property
    def is_field(self) -> bool:
        return self.kind is DomainKind.FINITE_FIELD

    def tables(self) -> FieldTables:
        if self.q is None:
            raise EuclidLabError(f"{self.label()} has no base field")
        return field_tables(self.q)

    def label(self) -> str:
        k = self.kind
        if k is DomainKind.INTEGERS:
            return "Z"
        if k is DomainKind.QUADRATIC:
            return f"O[{self.d}]"
        if k is DomainKind.FINITE_FIELD:
            return f"GF({self.q})"
        if k is DomainKind.POLY:
            return f"GF({self.q})[x]"
        return f"GF({self.q})[[x]]/x^{self.precision}"

    # -- element construction ----------------------------------------

    def element(self, payload) -> "Element":
        """Validate and canonicalize a raw payload into an element."""
        k = self.kind
        if k is DomainKind.INTEGERS:
            if not isinstance(payload, int):
                raise EuclidLabError(f"integer payload must be int, got {payload!r}")
            return Element(self, payload)
        if k is DomainKind.QUADRATIC:
            u, v = payload
            if self.half_lattice:
                if (u - v) % 2 != 0:
                    raise EuclidLabError(
                        f"doubled coordinates ({u}, {v}) break the half-lattice parity"
                    )
            elif u % 2 != 0 or v % 2 != 0:
                raise EuclidLabError(
                    f"doubled coordinates ({u}, {v}) must both be even for d={self.d}"
                )
            return Element(self, (u, v))
        if k is DomainKind.FINITE_FIELD:
            if not isinstance(payload, int) or not 0 <= payload < self.q:
                raise EuclidLabError(f"field index out of range: {payload!r}")
            return Element(self, payload)
        if k is DomainKind.POLY:
            coeffs = tuple(payload)
            while coeffs and coeffs[-1] == 0:
                coeffs = coeffs[:-1]
            if any(not 0 <= c < self.q for c in coeffs):
                raise EuclidLabError(f"coefficient out of range in {coeffs!r}")
            return Element(self, coeffs)
        coeffs = tuple(payload)
        if len(coeffs) > self.precision:
            if any(coeffs[self.precision:]):
                raise EuclidLabError(
                    f"series payload longer than precision {self.precision}"
                )
            coeffs = coeffs[: self.precision]
        coeffs = coeffs + (0,) * (self.precision - len(coeffs))
        if any(not 0 <= c < self.q for c in coeffs):
            raise EuclidLabError(f"coefficient out of range in {coeffs!r}")
        return Element(self, coeffs)

    def zero(self) -> "Element":
        return self.from_int(0)

    def one(self) -> "Element":
        return self.from_int(1)

    def from_int(self, n: int) -> "Element":
        """Image of the rational integer n under the canonical embedding."""
        k = self.kind
        if k is DomainKind.INTEGERS:
            return Element(self, n)
        if k is DomainKind.QUADRATIC:
            return Element(self, (2 * n, 0))
        if k is DomainKind.FINITE_FIELD:
            return Element(self, n % self.q)
        if k is DomainKind.POLY:
            c = n % self.q
            return Element(self, (c,) if c else ())
        c = n % self.q
        return Element(self, (c,) + (0,) * (self.precision - 1))

    def x(self) -> "Element":
        """The indeterminate, for polynomial and series rings."""
        if self.kind is DomainKind.POLY:
            return Element(self, (0, 1))
        if self.kind is DomainKind.SERIES:
            return Element(self, (0, 1) + (0,) * (self.precision - 2))
        raise EuclidLabError(f"{self.label()} has no indeterminate")


@dataclass(frozen=True)
class Element:
    """An exact element of a specific domain.

    Supports ring operators (+, -, *, unary -) with exact results; for
    series domains, multiplication is exact modulo x^T.
    """

    domain: DomainSpec
    payload: int | tuple

    def _require_same(self, other: "Element") -> None:
        if self.domain != other.domain:
            raise DomainMismatch(
                f"{self.domain.label()} vs {other.domain.label()}"
            )

    def __add__(self, other: "Element") -> "Element":
        self._require_same(other)
        return Element(self.domain, _add(self.domain, self.payload, other.payload))

    def __sub__(self, other: "Element") -> "Element":
        self._require_same(other)
        return self + (-other)

    def __neg__(self) -> "Element":
        return Element(self.domain, _neg(self.domain, self.payload))

    def __mul__(self, other: "Element") -> "Element":
        self._require_same(other)
        return Element(self.domain, _mul(self.domain, self.payload, other.payload))

    def is_zero(self) -> bool:
        k = self.domain.kind
        if k in (DomainKind.INTEGERS, DomainKind.FINITE_FIELD):
            return self.payload == 0
        if k is DomainKind.QUADRATIC:
            return self.payload == (0, 0)
        if k is DomainKind.POLY:
            return self.payload == ()
        return not any(self.payload)

    def is_unit(self) -> bool:
        """Unit membership by closed form."""
        k = self.domain.kind
        if k is DomainKind.INTEGERS:
            return self.payload in (1, -1)
        if k is DomainKind.QUADRATIC:
            return not self.is_zero() and self.norm() == 1
        if k is DomainKind.FINITE_FIELD:
            return self.payload != 0
        if k is DomainKind.POLY:
            return len(self.payload) == 1
        return bool(self.payload[0])

    def norm(self) -> int:
        """|u^2 - v^2 d| / 4 for quadratic elements.

        The absolute value makes the codomain the non-negative integers
        for real fields as well.
        """
        if self.domain.kind is not DomainKind.QUADRATIC:
            raise EuclidLabError("norm is defined on quadratic rings only")
        u, v = self.payload
        return abs(u * u - v * v * self.domain.d) // 4

    def norm_signed(self) -> int:
        if self.domain.kind is not DomainKind.QUADRATIC:
            raise EuclidLabError("norm is defined on quadratic rings only")
        u, v = self.payload
        return (u * u - v * v * self.domain.d) // 4

    def conjugate(self) -> "Element":
        if self.domain.kind is not DomainKind.QUADRATIC:
            raise EuclidLabError("conjugate is defined on quadratic rings only")
        u, v = self.payload
        return Element(self.domain, (u, -v))

    def degree(self) -> int:
        if self.domain.kind is not DomainKind.POLY:
            raise EuclidLabError("degree is defined on polynomial rings only")
        if not self.payload:
            raise EvalAtZero("degree of the zero polynomial")
        return len(self.payload) - 1

    def order(self) -> int:
        """Least index with a nonzero coefficient.

        Raises :class:`PrecisionExhausted` on the zero residue: a value
        that is 0 modulo x^T may be a genuine zero or a series of order
        >= T, and the representation cannot tell them apart.
        """
        if self.domain.kind is not DomainKind.SERIES:
            raise EuclidLabError("order is defined on series rings only")
        for i, c in enumerate(self.payload):
            if c:
                return i
        raise PrecisionExhausted(
            f"value is 0 mod x^{self.domain.precision}; order not determined"
        )

    def __repr__(self) -> str:
        return f"Element({self.domain.label()}, {self.payload!r})"


# ---------------------------------------------------------------------------
# payload arithmetic
# ---------------------------------------------------------------------------


def _add(dom: DomainSpec, x, y):
    k = dom.kind
    if k is DomainKind.INTEGERS:
        return x + y
    if k is DomainKind.QUADRATIC:
        return (x[0] + y[0], x[1] + y[1])
    t = dom.tables()
    if k is DomainKind.FINITE_FIELD:
        return t.add[x][y]
    if k is DomainKind.POLY:
        if len(x) < len(y):
            x, y = y, x
        out = list(x)
        for i, c in enumerate(y):
            out[i] = t.add[out[i]][c]
        while out and out[-1] == 0:
            out.pop()
        return tuple(out)
    return tuple(t.add[a][b] for a, b in zip(x, y))


def _neg(dom: DomainSpec, x):
    k = dom.kind
    if k is DomainKind.INTEGERS:
        return -x
    if k is DomainKind.QUADRATIC:
        return (-x[0], -x[1])
    t = dom.tables()
    if k is DomainKind.FINITE_FIELD:
        return t.neg[x]
    return tuple(t.neg[c] for c in x)


def _mul(dom: DomainSpec, x, y):
    k = dom.kind
    if k is DomainKind.INTEGERS:
        return x * y
    if k is DomainKind.QUADRATIC:
        u1, v1 = x
        u2, v2 = y
        return ((u1 * u2 + v1 * v2 * dom.d) // 2, (u1 * v2 + v1 * u2) // 2)
    t = dom.tables()
    if k is DomainKind.FINITE_FIELD:
        return t.mul[x][y]
    if k is DomainKind.POLY:
        if not x or not y:
            return ()
        out = [0] * (len(x) + len(y) - 1)
        for i, a in enumerate(x):
            if a == 0:
                continue
            row = t.mul[a]
            for j, b in enumerate(y):
                if b:
                    out[i + j] = t.add[out[i + j]][row[b]]
        while out and out[-1] == 0:
            out.pop()
        return tuple(out)
    T = dom.precision
    out = [0] * T
    for i, a in enumerate(x):
        if a == 0:
            continue
        row = t.mul[a]
        for j, b in enumerate(y):
            if i + j >= T:
                break
            if b:
                out[i + j] = t.add[out[i + j]][row[b]]
    return tuple(out)


# ---------------------------------------------------------------------------
# series helpers (exact-polynomial semantics)
# ---------------------------------------------------------------------------


def series_inverse_unit(b: Element) -> Element:
    """Inverse of a unit (order-0) series, exact modulo x^T."""
    dom = b.domain
    t = dom.tables()
    T = dom.precision
    u = b.payload
    if u[0] == 0:
        raise EuclidLabError("series inverse needs an order-0 value")
    w = [0] * T
    w[0] = t.inv[u[0]]
    for n in range(1, T):
        acc = 0
        for i in range(1, n + 1):
            if i < len(u) and u[i]:
                acc = t.add[acc][t.mul[u[i]][w[n - i]]]
        w[n] = t.mul[t.neg[acc]][w[0]]
    return Element(dom, tuple(w))


def series_quotient(a: Element, b: Element) -> Element:
    """The residue of a/b for series a, b with ord(a) >= ord(b).

    Payloads stand for exact polynomials, so the quotient's residue is
    fully determined even when ord(b) > 0.
    """
    dom = a.domain
    T = dom.precision
    if a.is_zero():
        return dom.zero()
    k = b.order()
    m = a.order()
    if m < k:
        raise EuclidLabError("series quotient requires ord(a) >= ord(b)")
    # shift both down by k; the shifted dividend keeps exact (zero) top
    # coefficients because the payload is an exact polynomial
    a_shift = dom.element(a.payload[k:] + (0,) * k)
    b_shift = dom.element(b.payload[k:] + (0,) * k)
    return a_shift * series_inverse_unit(b_shift)


# ---------------------------------------------------------------------------
# windows and enumeration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Window:
    """A finite, deterministically ordered set of nonzero elements.

    ``bound`` is the magnitude bound M for integers and quadratic rings
    (doubled coordinates for the latter) and the maximum degree D for
    polynomial rings.  Finite fields and series rings are always
    enumerated whole, so the bound is ignored there.
    """

    bound: int | None = None

    @staticmethod
    def magnitude(m: int) -> "Window":
        return Window(bound=m)

    @staticmethod
    def max_degree(d: int) -> "Window":
        return Window(bound=d)

    @staticmethod
    def whole() -> "Window":
        return Window(bound=None)

    def describe(self, domain: DomainSpec) -> str:
        k = domain.kind
        if k is DomainKind.INTEGERS or k is DomainKind.QUADRATIC:
            return f"|coords| <= {self.bound}"
        if k is DomainKind.POLY:
            return f"deg <= {self.bound}"
        if k is DomainKind.FINITE_FIELD:
            return "whole field"
        return f"all residues mod x^{domain.precision}"


def window_covers_domain(domain: DomainSpec, window: Window) -> bool:
    """True when the window provably contains every nonzero element."""
    return domain.kind in (DomainKind.FINITE_FIELD, DomainKind.SERIES)


def _require_bound(domain: DomainSpec, window: Window) -> int:
    if window.bound is None or window.bound < 0:
        raise EuclidLabError(
            f"{domain.label()} windows need a non-negative bound"
        )
    return window.bound


def _quad_sort_key(payload: tuple[int, int], d: int):
    u, v = payload
    n = abs(u * u - v * v * d) // 4
    return (n, abs(u), abs(v), u < 0, v < 0)


def _int_indices_to_payload(n: int, q: int) -> tuple[int, ...]:
    digits = []
    while n:
        n, c = divmod(n, q)
        digits.append(c)
    return tuple(digits)


def iter_nonzero(domain: DomainSpec, window: Window) -> Iterator[Element]:
    """Every nonzero element within the window exactly once.

    The order is the canonical small-first order: integers by magnitude
    with the positive sign first; quadratic elements by (norm, |u|,
    |v|, signs); field elements by index; polynomials and series
    residues in counting order of the coefficient vector read as a base
    q numeral, least significant digit first.
    """
    k = domain.kind
    if k is DomainKind.INTEGERS:
        m = _require_bound(domain, window)
        for n in range(1, m + 1):
            yield Element(domain, n)
            yield Element(domain, -n)
    elif k is DomainKind.QUADRATIC:
        m = _require_bound(domain, window)
        payloads = []
        for u in range(-m, m + 1):
            for v in range(-m, m + 1):
                if (u, v) == (0, 0):
                    continue
                if domain.half_lattice:
                    if (u - v) % 2 != 0:
                        continue
                elif u % 2 != 0 or v % 2 != 0:
                    continue
                payloads.append((u, v))
        payloads.sort(key=lambda p: _quad_sort_key(p, domain.d))
        for p in payloads:
            yield Element(domain, p)
    elif k is DomainKind.FINITE_FIELD:
        for i in range(1, domain.q):
            yield Element(domain, i)
    elif k is DomainKind.POLY:
        dmax = _require_bound(domain, window)
        for n in range(1, domain.q ** (dmax + 1)):
            yield Element(domain, _int_indices_to_payload(n, domain.q))
    else:
        T = domain.precision
        for n in range(1, domain.q ** T):
            digits = _int_indices_to_payload(n, domain.q)
            yield Element(domain, digits + (0,) * (T - len(digits)))


def enumerate_nonzero(domain: DomainSpec, window: Window) -> tuple[Element, ...]:
    return tuple(iter_nonzero(domain, window))


def units_in_window(domain: DomainSpec, window: Window) -> tuple[Element, ...]:
    """Units of the domain inside the window, in window order.

    Computed by the closed form and cross-checked against an inverse
    scan (each claimed unit must have an inverse in the window; for
    small windows every non-unit is also confirmed inverse-free).
    """
    elems = enumerate_nonzero(domain, window)
    units = tuple(e for e in elems if e.is_unit())
    one = domain.one()
    for u in units:
        if not any((u * v) == one for v in elems):
            raise EuclidLabError(
                f"unit cross-check failed: {u!r} has no inverse in the window"
            )
    if len(elems) <= 1024:
        scanned = set()
        for a, b in itertools.product(elems, repeat=2):
            if a * b == one:
                scanned.add(a.payload)
        closed = set(u.payload for u in units)
        if scanned != closed:
            raise EuclidLabError(
                f"unit cross-check failed: closed form {sorted(closed)} vs "
                f"scan {sorted(scanned)}"
            )
    return units
