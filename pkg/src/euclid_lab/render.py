"""Plain-text element syntax: rendering and parsing.

Grammar accepted on the command line:

* integers: ``-7``
* polynomials and series: caret powers with explicit coefficients,
  ``x^3+x+1``, ``2x^2+x``; over GF(4) the letters ``a`` and ``b`` (or
  the rendered forms α and β) name the two non-rational elements, as in
  ``a*x^2+b``.
* quadratic integers: ``u+v*sqrt(d)`` with half-integer parts written
  ``u/2``, e.g. ``1/2+3/2*sqrt(-3)``; for d = -1 the shorthand ``i``
  is accepted (``2+i``).
"""

from __future__ import annotations

from fractions import Fraction

from .domains import DomainKind, DomainSpec, Element
from .errors import ParseError

_GF4_NAMES = {0: "0", 1: "1", 2: "α", 3: "β"}
_GF4_TOKENS = {"a": 2, "b": 3, "α": 2, "β": 3, "alpha": 2, "beta": 3}


def render_element(e: Element) -> str:
    k = e.domain.kind
    if k is DomainKind.INTEGERS:
        return str(e.payload)
    if k is DomainKind.FINITE_FIELD:
        return _field_coeff(e.domain, e.payload) or "1"
    if k is DomainKind.QUADRATIC:
        return _render_quadratic(e)
    return _render_poly(e.domain, e.payload)


def _field_coeff(domain: DomainSpec, c: int) -> str:
    """Field element as a coefficient string ('' means an implicit 1)."""
    if domain.q == 4:
        return {0: "0", 1: "", 2: "α", 3: "β"}[c]
    return "" if c == 1 else str(c)


def render_field_element(domain: DomainSpec, c: int) -> str:
    if domain.q == 4:
        return _GF4_NAMES[c]
    return str(c)


def _render_poly(domain: DomainSpec, coeffs: tuple) -> str:
    terms = []
    for power in range(len(coeffs) - 1, -1, -1):
        c = coeffs[power]
        if c == 0:
            continue
        if power == 0:
            terms.append(render_field_element(domain, c))
        else:
            head = _field_coeff(domain, c)
            xpow = "x" if power == 1 else f"x^{power}"
            terms.append(f"{head}{xpow}")
    return "+".join(terms) if terms else "0"


def _render_quadratic(e: Element) -> str:
    u, v = e.payload
    d = e.domain.d

    def half(n: int, unitless: bool) -> str:
        whole, rem = divmod(n, 2)
        if rem == 0:
            if unitless:
                return str(whole)
            if whole == 1:
                return ""
            if whole == -1:
                return "-"
            return f"{whole}*"
        frac = f"{n}/2"
        return frac if unitless else f"{frac}*"

    radical = "i" if d == -1 else f"sqrt({d})"
    if v == 0:
        return half(u, unitless=True)
    rad_term = f"{half(v, unitless=False)}{radical}"
    if u == 0:
        return rad_term
    joiner = "" if rad_term.startswith("-") else "+"
    return f"{half(u, unitless=True)}{joiner}{rad_term}"


def render_division(a: Element, b: Element, q: Element, r: Element) -> str:
    wrap = lambda s: f"({s})" if ("+" in s[1:] or "-" in s[1:]) else s  # noqa: E731
    return (
        f"{render_element(a)} = {wrap(render_element(q))}"
        f"·{wrap(render_element(b))} + {render_element(r)}"
    )


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------


def _signed_terms(text: str) -> list[str]:
    """Split on top-level + and -, keeping signs attached."""
    text = text.replace(" ", "")
    if not text:
        raise ParseError("empty element")
    terms = []
    depth = 0
    current = ""
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ParseError(f"unbalanced parentheses in {text!r}")
        if ch in "+-" and depth == 0 and i > 0 and text[i - 1] not in "+-(*/^":
            terms.append(current)
            current = ch if ch == "-" else ""
            continue
        current += ch
    if depth != 0:
        raise ParseError(f"unbalanced parentheses in {text!r}")
    terms.append(current)
    return [t for t in terms if t not in ("", "+")]


def parse_element(domain: DomainSpec, text: str) -> Element:
    k = domain.kind
    text = text.strip()
    try:
        if k is DomainKind.INTEGERS:
            return domain.element(int(text))
        if k is DomainKind.FINITE_FIELD:
            return domain.element(_parse_field_token(domain, text))
        if k is DomainKind.QUADRATIC:
            return _parse_quadratic(domain, text)
        return _parse_poly(domain, text)
    except ParseError:
        raise
    except Exception as exc:
        raise ParseError(f"cannot parse {text!r} in {domain.label()}: {exc}") from exc


def _parse_field_token(domain: DomainSpec, token: str) -> int:
    token = token.strip()
    if domain.q == 4 and token.lower() in _GF4_TOKENS:
        return _GF4_TOKENS[token.lower()]
    value = int(token)
    if domain.q == 4 and value not in (0, 1):
        raise ParseError(f"{token!r} is not a GF(4) element; use 0, 1, a, b")
    return value % domain.q


def _parse_poly(domain: DomainSpec, text: str) -> Element:
    coeffs: dict[int, int] = {}
    tables = domain.tables()
    for term in _signed_terms(text):
        negate = term.startswith("-")
        if negate:
            term = term[1:]
        coef_str, power = _split_power(term)
        c = _parse_field_token(domain, coef_str) if coef_str else 1
        if negate:
            c = tables.neg[c]
        coeffs[power] = tables.add[coeffs.get(power, 0)][c]
    top = max(coeffs, default=0)
    vec = [0] * (top + 1)
    for p, c in coeffs.items():
        vec[p] = c
    return domain.element(tuple(vec))


def _split_power(term: str) -> tuple[str, int]:
    """'2x^3' -> ('2', 3); 'x' -> ('', 1); '5' -> ('5', 0)."""
    if "x" not in term:
        return term, 0
    head, _, tail = term.partition("x")
    head = head.rstrip("*")
    if tail == "":
        return head, 1
    if not tail.startswith("^"):
        raise ParseError(f"malformed power in {term!r}")
    return head, int(tail[1:])


def _parse_rational(token: str) -> Fraction:
    if not token or token == "+":
        return Fraction(1)
    if token == "-":
        return Fraction(-1)
    return Fraction(token)


def _parse_quadratic(domain: DomainSpec, text: str) -> Element:
    u = Fraction(0)  # rational part
    v = Fraction(0)  # coefficient of sqrt(d)
    for term in _signed_terms(text):
        if "sqrt(" in term:
            coef_str, _, rest = term.partition("sqrt(")
            arg, _, trailing = rest.partition(")")
            if trailing:
                raise ParseError(f"trailing text after sqrt in {term!r}")
            if int(arg) != domain.d:
                raise ParseError(
                    f"sqrt({arg}) does not live in {domain.label()}"
                )
            v += _parse_rational(coef_str.rstrip("*"))
        elif term.endswith("i") and domain.d == -1:
            v += _parse_rational(term[:-1].rstrip("*"))
        else:
            u += _parse_rational(term)
    du, dv = 2 * u, 2 * v
    if du.denominator != 1 or dv.denominator != 1:
        raise ParseError(
            f"{text!r} is not on the lattice of {domain.label()}: "
            "only half-integer coordinates are allowed"
        )
    return domain.element((int(du), int(dv)))
