import itertools

import pytest

from euclid_lab.domains import DomainSpec, Window, enumerate_nonzero
from euclid_lab.functions import EuclideanFnSpec
from euclid_lab.properties import (
    PropertyKind,
    Verdict,
    check_property,
    check_unit_lemmas,
    replay_witness,
    theorem_matrix,
    unit_field_closure,
)

Z = DomainSpec.integers()
GAUSS = DomainSpec.quadratic(-1)
F3 = DomainSpec.finite_field(3)
F4 = DomainSpec.finite_field(4)
F5 = DomainSpec.finite_field(5)
P2 = DomainSpec.poly(2)
P3 = DomainSpec.poly(3)
S2 = DomainSpec.series(2, 8)

ABS = EuclideanFnSpec.abs_value()
DEG = EuclideanFnSpec.degree()
ORD = EuclideanFnSpec.order()


def paper_f4_table():
    return EuclideanFnSpec.field_table(
        {F4.one(): 0, F4.element(2): 1, F4.element(3): 1}
    )


# ---------------------------------------------------------------------------
# raw census oracle: field predicates recomputed with plain modular
# arithmetic, no lab machinery
# ---------------------------------------------------------------------------


def raw_field_census(q: int, max_value: int):
    """Classify every table f: F_q^x -> {0..max_value} directly."""
    nonzero = list(range(1, q))
    strongly, ultra, uniquely, constant = set(), set(), set(), set()
    for values in itertools.product(range(max_value + 1), repeat=q - 1):
        f = dict(zip(nonzero, values))
        if len(set(values)) == 1:
            constant.add(values)
        if all(f[a] <= f[a * b % q] for a in nonzero for b in nonzero):
            strongly.add(values)
        if all(
            f[(a + b) % q] <= max(f[a], f[b])
            for a in nonzero
            for b in nonzero
            if (a + b) % q != 0
        ):
            ultra.add(values)
        ok = True
        for a in range(q):
            for b in nonzero:
                count = 0
                for qq in range(q):
                    r = (a - qq * b) % q
                    if r == 0 or f[r] < f[b]:
                        count += 1
                if count != 1:
                    ok = False
        if ok:
            uniquely.add(values)
    return strongly, ultra, uniquely, constant


def engine_field_census(q: int, max_value: int):
    dom = DomainSpec.finite_field(q)
    elems = enumerate_nonzero(dom, Window.whole())
    strongly, ultra, uniquely = set(), set(), set()
    contradictions = 0
    for values in itertools.product(range(max_value + 1), repeat=q - 1):
        fn = EuclideanFnSpec.field_table(dict(zip(elems, values)))
        m = theorem_matrix(fn, dom, Window.whole())
        if m.strongly.verdict is Verdict.EXHAUSTIVELY_VERIFIED:
            strongly.add(values)
        if m.ultra.verdict is Verdict.EXHAUSTIVELY_VERIFIED:
            ultra.add(values)
        if m.uniquely.verdict is Verdict.EXHAUSTIVELY_VERIFIED:
            uniquely.add(values)
        contradictions += len(m.contradictions)
    return strongly, ultra, uniquely, contradictions


# ---------------------------------------------------------------------------
# classical witnesses
# ---------------------------------------------------------------------------


def test_ultra_violated_on_integers():
    rep = check_property(PropertyKind.ULTRA_EUCLIDEAN, ABS, Z, Window.magnitude(3))
    assert rep.verdict is Verdict.VIOLATED
    assert [e.payload for e in rep.witness.elements] == [1, 1]
    assert rep.witness.values == (1, 1, 2)
    assert replay_witness(rep)


def test_ultra_violated_on_series():
    rep = check_property(PropertyKind.ULTRA_EUCLIDEAN, ORD, S2, Window.whole())
    assert rep.verdict is Verdict.VIOLATED
    a, b = rep.witness.elements
    assert a == S2.one()
    assert b == S2.element((1, 1) + (0,) * 6)  # x - 1 over GF(2)
    assert replay_witness(rep)


def test_strongly_violated_on_f4_table():
    rep = check_property(
        PropertyKind.STRONGLY_EUCLIDEAN, paper_f4_table(), F4, Window.whole()
    )
    assert rep.verdict is Verdict.VIOLATED
    a, b = rep.witness.elements
    assert (a * b) == F4.one()
    assert replay_witness(rep)


def test_ultra_exhaustive_on_f4_table():
    rep = check_property(
        PropertyKind.ULTRA_EUCLIDEAN, paper_f4_table(), F4, Window.whole()
    )
    assert rep.verdict is Verdict.EXHAUSTIVELY_VERIFIED
    assert rep.pairs_skipped == 0


def test_uniquely_no_violation_for_degree():
    rep = check_property(
        PropertyKind.UNIQUELY_EUCLIDEAN, DEG, P2, Window.max_degree(4)
    )
    assert rep.verdict is Verdict.NO_VIOLATION_FOUND
    assert rep.pairs_skipped == 0


def test_euclidean_verified_on_field():
    rep = check_property(PropertyKind.EUCLIDEAN, paper_f4_table(), F4, Window.whole())
    assert rep.verdict is Verdict.EXHAUSTIVELY_VERIFIED


def test_strongly_on_series_skips_truncated_products():
    rep = check_property(PropertyKind.STRONGLY_EUCLIDEAN, ORD, S2, Window.whole())
    assert rep.verdict is Verdict.NO_VIOLATION_FOUND
    assert rep.pairs_skipped > 0


def test_non_euclidean_exception_table_detected():
    # raising the value at +/-1 and +/-2 leaves 3 with no valid division by 2
    fn = EuclideanFnSpec.with_exceptions(
        ABS,
        {Z.from_int(1): 9, Z.from_int(-1): 9, Z.from_int(2): 9, Z.from_int(-2): 9},
    )
    rep = check_property(PropertyKind.EUCLIDEAN, fn, Z, Window.magnitude(4))
    assert rep.verdict is Verdict.VIOLATED
    assert replay_witness(rep)


# ---------------------------------------------------------------------------
# window monotonicity
# ---------------------------------------------------------------------------


def test_violations_grow_with_window():
    small = check_property(
        PropertyKind.ULTRA_EUCLIDEAN, ABS, Z, Window.magnitude(3), all_violations=True
    )
    large = check_property(
        PropertyKind.ULTRA_EUCLIDEAN, ABS, Z, Window.magnitude(6), all_violations=True
    )
    small_set = {tuple(e.payload for e in w.elements) for w in small.all_witnesses}
    large_set = {tuple(e.payload for e in w.elements) for w in large.all_witnesses}
    assert small_set <= large_set
    assert len(large_set) > len(small_set)


# ---------------------------------------------------------------------------
# unit lemmas
# ---------------------------------------------------------------------------


def test_unit_lemmas_on_integers():
    equality, minimum = check_unit_lemmas(ABS, Z, Window.magnitude(5))
    assert equality.verdict is Verdict.NO_VIOLATION_FOUND
    assert minimum.verdict is Verdict.NO_VIOLATION_FOUND


def test_min_at_units_f3_poly():
    _, minimum = check_unit_lemmas(DEG, P3, Window.max_degree(3))
    assert minimum.verdict is Verdict.NO_VIOLATION_FOUND


def test_min_at_units_gaussian():
    _, minimum = check_unit_lemmas(
        EuclideanFnSpec.quad_norm(), GAUSS, Window.magnitude(6)
    )
    assert minimum.verdict is Verdict.NO_VIOLATION_FOUND


def test_unit_lemmas_not_applicable_without_growth():
    equality, minimum = check_unit_lemmas(paper_f4_table(), F4, Window.whole())
    assert equality.verdict is Verdict.NOT_APPLICABLE
    assert minimum.verdict is Verdict.NOT_APPLICABLE


def test_unit_equality_detects_bad_table():
    # constant-except-one table on F5 preserves size under a non-unit pairing
    fn = EuclideanFnSpec.field_table(
        {F5.element(1): 1, F5.element(2): 1, F5.element(3): 1, F5.element(4): 1}
    )
    equality, minimum = check_unit_lemmas(fn, F5, Window.whole())
    # on a field every nonzero element is a unit, so both lemmas hold
    assert equality.verdict is Verdict.EXHAUSTIVELY_VERIFIED
    assert minimum.verdict is Verdict.EXHAUSTIVELY_VERIFIED


# ---------------------------------------------------------------------------
# unit field closure
# ---------------------------------------------------------------------------


def test_unit_closure_field():
    rep = unit_field_closure(F5, Window.whole())
    assert rep.verdict is Verdict.EXHAUSTIVELY_VERIFIED


def test_unit_closure_violated_on_integers():
    rep = unit_field_closure(Z, Window.magnitude(3))
    assert rep.verdict is Verdict.VIOLATED
    u, v, s = rep.witness.elements
    assert (u.payload, v.payload, s.payload) == (1, 1, 2)
    assert replay_witness(rep)


def test_unit_closure_f2_poly():
    rep = unit_field_closure(P2, Window.max_degree(3))
    assert rep.verdict is Verdict.NO_VIOLATION_FOUND


# ---------------------------------------------------------------------------
# theorem matrix
# ---------------------------------------------------------------------------


def test_matrix_constant_table_on_f5():
    fn = EuclideanFnSpec.field_table({e: 2 for e in enumerate_nonzero(F5, Window.whole())})
    m = theorem_matrix(fn, F5, Window.whole())
    assert m.uniquely.verdict is Verdict.EXHAUSTIVELY_VERIFIED
    assert m.strongly.verdict is Verdict.EXHAUSTIVELY_VERIFIED
    assert m.ultra.verdict is Verdict.EXHAUSTIVELY_VERIFIED
    assert m.consistent


def test_matrix_f4_paper_table():
    m = theorem_matrix(paper_f4_table(), F4, Window.whole())
    assert m.ultra.verdict is Verdict.EXHAUSTIVELY_VERIFIED
    assert m.strongly.verdict is Verdict.VIOLATED
    assert m.uniquely.verdict is Verdict.VIOLATED
    assert m.consistent


def test_matrix_integers_abs():
    m = theorem_matrix(ABS, Z, Window.magnitude(10))
    assert m.strongly.verdict is Verdict.NO_VIOLATION_FOUND
    assert m.ultra.verdict is Verdict.VIOLATED
    assert m.uniquely.verdict is Verdict.VIOLATED
    assert [e.payload for e in m.uniquely.witness.elements] == [1, 2]
    assert m.consistent
    assert m.derived_witness_note is not None


def test_matrix_reports_replay():
    m = theorem_matrix(ABS, Z, Window.magnitude(8))
    for rep in m.reports():
        if rep.verdict is Verdict.VIOLATED:
            assert replay_witness(rep)


# ---------------------------------------------------------------------------
# small-field censuses, engine vs raw oracle
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("q,max_value", [(2, 3), (3, 3), (5, 2)])
def test_census_engine_matches_raw_oracle(q, max_value):
    raw_strongly, raw_ultra, raw_uniquely, raw_constant = raw_field_census(
        q, max_value
    )
    eng_strongly, eng_ultra, eng_uniquely, contradictions = engine_field_census(
        q, max_value
    )
    assert eng_strongly == raw_strongly
    assert eng_ultra == raw_ultra
    assert eng_uniquely == raw_uniquely
    assert contradictions == 0
    # on a field: uniquely = strongly = the constant tables
    assert raw_uniquely == raw_constant == raw_strongly
    assert raw_uniquely <= raw_ultra


def test_census_f4_ultra_strictly_larger():
    eng_strongly, eng_ultra, eng_uniquely, contradictions = engine_field_census(4, 1)
    assert contradictions == 0
    assert eng_uniquely == eng_strongly
    assert eng_uniquely < eng_ultra  # char-2 field with more than two elements
    assert len(eng_uniquely) == 2  # the constant tables with values in {0,1}
