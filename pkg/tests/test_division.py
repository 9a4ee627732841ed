import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from euclid_lab.division import (
    canonical_divide,
    candidate_division,
    decompose_by,
    enumerate_valid_divisions,
    exact_quotient,
    gcd_extended,
    is_valid_division,
    sublevel_elements,
)
from euclid_lab.domains import DomainSpec, Window, enumerate_nonzero
from euclid_lab.errors import (
    DivisionByZero,
    IdentityFails,
    NonUnitRemainder,
    PrecisionExhausted,
    WindowRequired,
)
from euclid_lab.functions import EuclideanFnSpec, default_fn, evaluate

Z = DomainSpec.integers()
GAUSS = DomainSpec.quadratic(-1)
F4 = DomainSpec.finite_field(4)
P2 = DomainSpec.poly(2)
P3 = DomainSpec.poly(3)
S2 = DomainSpec.series(2, 8)

ABS = EuclideanFnSpec.abs_value()
DEG = EuclideanFnSpec.degree()


# ---------------------------------------------------------------------------
# independent oracles
# ---------------------------------------------------------------------------


def oracle_int_divisions(a: int, b: int) -> set[tuple[int, int]]:
    """All valid divisions of a by b over Z by raw brute force."""
    found = set()
    for q in range(-abs(a) - abs(b) - 2, abs(a) + abs(b) + 3):
        r = a - q * b
        if r == 0 or abs(r) < abs(b):
            found.add((q, r))
    return found


def gauss_mul(x, y):
    return (x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0])


def gauss_norm(x):
    return x[0] * x[0] + x[1] * x[1]


def oracle_gauss_divisions(a, b, qbox) -> set:
    """Valid divisions of a by b in Z[i]; raw integer-pair arithmetic."""
    found = set()
    for qu in range(-qbox, qbox + 1):
        for qv in range(-qbox, qbox + 1):
            q = (qu, qv)
            qb = gauss_mul(q, b)
            r = (a[0] - qb[0], a[1] - qb[1])
            if r == (0, 0) or gauss_norm(r) < gauss_norm(b):
                found.add((q, r))
    return found


def oracle_taylor_shift(coeffs: list[int]) -> list[int]:
    """Coefficients of p(t+1) over GF(2), by Horner composition."""

    def add(p, q):
        n = max(len(p), len(q))
        out = [(p[i] if i < len(p) else 0) ^ (q[i] if i < len(q) else 0) for i in range(n)]
        while out and out[-1] == 0:
            out.pop()
        return out

    def mul_by_t_plus_1(p):
        return add([0] + p, p)

    acc: list[int] = []
    for c in reversed(coeffs):
        acc = add(mul_by_t_plus_1(acc), [c] if c else [])
    return acc


# ---------------------------------------------------------------------------
# validity
# ---------------------------------------------------------------------------


def test_valid_divisions_of_one_by_two():
    one, two = Z.from_int(1), Z.from_int(2)
    assert is_valid_division(ABS, one, two, Z.from_int(0), Z.from_int(1))
    assert is_valid_division(ABS, one, two, Z.from_int(1), Z.from_int(-1))
    assert not is_valid_division(ABS, one, two, Z.from_int(2), Z.from_int(-3))


def test_identity_failure_is_distinguished():
    with pytest.raises(IdentityFails):
        is_valid_division(ABS, Z.from_int(1), Z.from_int(2), Z.from_int(1), Z.from_int(7))


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        is_valid_division(ABS, Z.from_int(1), Z.zero(), Z.zero(), Z.zero())


# ---------------------------------------------------------------------------
# canonical division
# ---------------------------------------------------------------------------


def test_canonical_integers():
    q, r = canonical_divide(Z, Z.from_int(7), Z.from_int(3))
    assert (q.payload, r.payload) == (2, 1)
    q, r = canonical_divide(Z, Z.from_int(-7), Z.from_int(3))
    assert (q.payload, r.payload) == (-3, 2)  # least non-negative remainder


def test_canonical_gaussian_example():
    a, b = GAUSS.element((14, 4)), GAUSS.from_int(3)  # 7+2i by 3
    q, r = canonical_divide(GAUSS, a, b)
    assert q == GAUSS.element((4, 2))  # 2+i
    assert r == GAUSS.element((2, -2))  # 1-i
    assert r.norm() == 2 < 9


def test_canonical_poly():
    a = P2.element((1, 0, 1))  # x^2+1
    q, r = canonical_divide(P2, a, P2.x())
    assert q == P2.x() and r == P2.one()


def test_canonical_series():
    a, x = S2.one(), S2.x()
    q, r = canonical_divide(S2, a, x)
    assert q.is_zero() and r == a
    q, r = canonical_divide(S2, x * x, x)
    assert q == x and r.is_zero()


def test_canonical_series_zero_divisor_precision():
    with pytest.raises(PrecisionExhausted):
        canonical_divide(S2, S2.one(), S2.zero())


@settings(max_examples=150, deadline=None)
@given(
    st.integers(min_value=-80, max_value=80),
    st.integers(min_value=-80, max_value=80).filter(lambda n: n != 0),
)
def test_canonical_int_always_valid(a, b):
    ea, eb = Z.from_int(a), Z.from_int(b)
    q, r = canonical_divide(Z, ea, eb)
    assert candidate_division(ABS, ea, eb, q, r).valid


@pytest.mark.parametrize("d", [-11, -7, -3, -2, -1, 2, 3])
def test_canonical_quadratic_always_valid(d):
    dom = DomainSpec.quadratic(d)
    fn = EuclideanFnSpec.quad_norm()
    elems = enumerate_nonzero(dom, Window.magnitude(5))
    for a, b in itertools.product(elems[:40], elems[:40]):
        q, r = canonical_divide(dom, a, b)
        assert candidate_division(fn, a, b, q, r).valid


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------


def test_enumerate_one_by_two_exact():
    res = enumerate_valid_divisions(ABS, Z.from_int(1), Z.from_int(2))
    assert res.complete and res.skipped == 0
    assert {(d.q.payload, d.r.payload) for d in res.divisions} == {(0, 1), (1, -1)}


def test_enumerate_matches_oracle_integers():
    for a, b in itertools.product(range(-9, 10), range(-6, 7)):
        if b == 0:
            continue
        res = enumerate_valid_divisions(ABS, Z.from_int(a), Z.from_int(b))
        assert res.complete
        got = {(d.q.payload, d.r.payload) for d in res.divisions}
        assert got == oracle_int_divisions(a, b)


def test_enumerate_f4_one_by_alpha():
    one, alpha, beta = F4.one(), F4.element(2), F4.element(3)
    fn = EuclideanFnSpec.field_table({one: 0, alpha: 1, beta: 1})
    res = enumerate_valid_divisions(fn, one, alpha)
    assert res.complete
    got = {(d.q.payload, d.r.payload) for d in res.divisions}
    # two valid divisions: q=0 leaves remainder 1 (size 0 < 1), and
    # q=beta divides exactly; q=1 leaves beta whose size equals alpha's
    assert got == {(0, 1), (3, 0)}
    assert not is_valid_division(fn, one, alpha, one, beta)


def test_enumerate_series_contains_both_unit_adjustments():
    fn = EuclideanFnSpec.order()
    res = enumerate_valid_divisions(fn, S2.one(), S2.x())
    assert res.complete
    pairs = {(d.q.payload, d.r.payload) for d in res.divisions}
    one_minus_x = S2.element((1, 1) + (0,) * 6)
    assert (S2.zero().payload, S2.one().payload) in pairs
    assert (S2.one().payload, one_minus_x.payload) in pairs


def test_enumerate_zero_dividend():
    res = enumerate_valid_divisions(ABS, Z.zero(), Z.from_int(2))
    assert res.complete
    assert {(d.q.payload, d.r.payload) for d in res.divisions} == {(0, 0)}
    one, alpha = F4.one(), F4.element(2)
    fn = EuclideanFnSpec.field_table({one: 0, alpha: 1, F4.element(3): 1})
    res = enumerate_valid_divisions(fn, F4.zero(), alpha)
    assert {(d.q.payload, d.r.payload) for d in res.divisions} == {(0, 0), (3, 1)}


def test_enumerate_never_repeats_remainders():
    fn = EuclideanFnSpec.order()
    elems = enumerate_nonzero(S2, Window.whole())[:40]
    for a, b in itertools.product(elems[:12], elems[:12]):
        res = enumerate_valid_divisions(fn, a, b)
        remainders = [d.r for d in res.divisions]
        assert len(remainders) == len(set(remainders))


def test_real_quadratic_norm_ball_needs_window():
    dom = DomainSpec.quadratic(2)
    fn = EuclideanFnSpec.quad_norm()
    assert sublevel_elements(fn, dom, 5) is None
    with pytest.raises(WindowRequired):
        enumerate_valid_divisions(fn, dom.from_int(7), dom.from_int(3))
    res = enumerate_valid_divisions(
        fn, dom.from_int(7), dom.from_int(3), window=Window.magnitude(6)
    )
    assert not res.complete
    assert any(d.r.is_zero() is False for d in res.divisions)


# ---------------------------------------------------------------------------
# gcd
# ---------------------------------------------------------------------------


def test_gcd_integers():
    g, s, t = gcd_extended(Z, Z.from_int(12), Z.from_int(18))
    assert g.payload == 6
    assert s.payload * 12 + t.payload * 18 == 6


def test_gcd_poly_monic():
    a = P2.element((1, 0, 1))  # x^2+1 = (x+1)^2 over GF(2)
    b = P2.element((1, 1))
    g, s, t = gcd_extended(P2, a, b)
    assert g == b
    assert s * a + t * b == g


def test_gcd_gaussian_associate():
    five, z = GAUSS.from_int(5), GAUSS.element((4, 2))
    g, s, t = gcd_extended(GAUSS, five, z)
    assert s * five + t * z == g
    assert exact_quotient(g, z) is not None and exact_quotient(z, g) is not None
    # canonical associate choice is deterministic
    g2, _, _ = gcd_extended(GAUSS, five, z)
    assert g == g2


def test_gcd_real_quadratic():
    dom = DomainSpec.quadratic(3)
    a, b = dom.from_int(10), dom.from_int(4)
    g, s, t = gcd_extended(dom, a, b)
    assert s * a + t * b == g
    assert exact_quotient(a, g) is not None and exact_quotient(b, g) is not None


def test_gcd_series_is_power_of_x():
    x = S2.x()
    a = x * x * S2.element((1, 1, 0, 0, 0, 0, 0, 0))
    b = x * S2.element((1, 0, 1, 0, 0, 0, 0, 0))
    g, s, t = gcd_extended(S2, a, b)
    assert g == x
    assert s * a + t * b == g


@settings(max_examples=100, deadline=None)
@given(
    st.integers(min_value=-200, max_value=200),
    st.integers(min_value=-200, max_value=200),
)
def test_gcd_bezout_random(a, b):
    if a == 0 and b == 0:
        return
    import math

    g, s, t = gcd_extended(Z, Z.from_int(a), Z.from_int(b))
    assert g.payload == math.gcd(a, b)
    assert s.payload * a + t.payload * b == g.payload


# ---------------------------------------------------------------------------
# decomposition
# ---------------------------------------------------------------------------


def test_decompose_extracts_coefficients():
    a = P2.element((1, 1, 0, 1))  # x^3+x+1
    d = decompose_by(DEG, a, P2.x())
    assert [c.payload for c in d.coefficients] == [(1,), (1,), (), (1,)]
    assert d.reconstruct() == a


def test_decompose_f3():
    a = P3.element((0, 1, 2))  # 2x^2+x
    d = decompose_by(DEG, a, P3.x())
    assert [c.payload for c in d.coefficients] == [(), (1,), (2,)]


def test_decompose_by_x_plus_one():
    a = P2.element((1, 0, 1))  # x^2+1 = (x+1)^2
    d = decompose_by(DEG, a, P2.element((1, 1)))
    assert [c.payload for c in d.coefficients] == [(), (), (1,)]
    assert d.reconstruct() == a


def test_decompose_matches_taylor_shift_oracle():
    rng = random.Random(90125)
    base = P2.element((1, 1))
    for _ in range(60):
        coeffs = [rng.randrange(2) for _ in range(rng.randrange(1, 10))]
        a = P2.element(tuple(coeffs))
        if a.is_zero():
            continue
        d = decompose_by(DEG, a, base)
        got = [c.payload and c.payload[0] for c in d.coefficients]
        got = [1 if c else 0 for c in got]
        while got and got[-1] == 0:
            got.pop()
        assert got == oracle_taylor_shift(list(a.payload))
        assert d.reconstruct() == a


def test_decompose_zero():
    d = decompose_by(DEG, P2.zero(), P2.x())
    assert d.coefficients == ()
    assert d.reconstruct() == P2.zero()


def test_decompose_rejects_non_unit_remainder():
    # dividing by x^2 leaves degree-1 remainders, which are not units
    with pytest.raises(NonUnitRemainder):
        decompose_by(DEG, P2.element((0, 1, 0, 1)), P2.element((0, 0, 1)))


def test_decompose_by_unit_rejected():
    with pytest.raises(Exception):
        decompose_by(DEG, P2.element((1, 1)), P2.one())


# ---------------------------------------------------------------------------
# Gaussian enumeration against the raw oracle
# ---------------------------------------------------------------------------


def test_gaussian_enumeration_matches_oracle_small():
    fn = EuclideanFnSpec.quad_norm()
    elems = enumerate_nonzero(GAUSS, Window.magnitude(4))
    for a, b in itertools.product(elems, repeat=2):
        res = enumerate_valid_divisions(fn, a, b)
        assert res.complete
        got = {
            ((d.q.payload[0] // 2, d.q.payload[1] // 2),
             (d.r.payload[0] // 2, d.r.payload[1] // 2))
            for d in res.divisions
        }
        ra = (a.payload[0] // 2, a.payload[1] // 2)
        rb = (b.payload[0] // 2, b.payload[1] // 2)
        assert got == oracle_gauss_divisions(ra, rb, qbox=8)
