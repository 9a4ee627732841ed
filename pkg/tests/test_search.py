import pytest

from euclid_lab.domains import DomainSpec, Window
from euclid_lab.errors import BudgetZero
from euclid_lab.functions import EuclideanFnSpec, FnKind, validate_fspec
from euclid_lab.properties import Verdict
from euclid_lab.search import (
    STAGE_REFINED_ULTRA,
    STAGE_STRONGLY,
    STAGE_ULTRA,
    FamilySpec,
    GeneratorKind,
    enumerate_family,
    run_search,
    verify_candidate,
    worker_count,
)

Z = DomainSpec.integers()
F4 = DomainSpec.finite_field(4)
F5 = DomainSpec.finite_field(5)
P2 = DomainSpec.poly(2)
P4 = DomainSpec.poly(4)


def f4_tables(max_value, budget=100000):
    return FamilySpec(
        domain=F4,
        generator=GeneratorKind.ALL_FIELD_TABLES,
        budget=budget,
        max_value=max_value,
    )


# ---------------------------------------------------------------------------
# family enumeration
# ---------------------------------------------------------------------------


def test_f4_table_family_count():
    fns = enumerate_family(f4_tables(max_value=1))
    assert len(fns) == 8  # 2^3 maps from three nonzero elements to {0,1}


def test_f5_table_family_count():
    family = FamilySpec(
        domain=F5,
        generator=GeneratorKind.ALL_FIELD_TABLES,
        budget=100000,
        max_value=3,
    )
    assert len(enumerate_family(family)) == 256  # 4^4


def test_budget_zero_rejected():
    with pytest.raises(BudgetZero):
        enumerate_family(f4_tables(max_value=1, budget=0))


def test_budget_truncates():
    assert len(enumerate_family(f4_tables(max_value=1, budget=3))) == 3


def test_integer_perturbations_have_single_overrides():
    family = FamilySpec(
        domain=Z,
        generator=GeneratorKind.INTEGER_PERTURBATIONS,
        budget=10000,
        max_value=12,
        magnitude=6,
        exception_budget=1,
    )
    fns = enumerate_family(family)
    assert fns[0].kind is FnKind.ABS_VALUE
    overlays = [fn for fn in fns if fn.kind is FnKind.EXCEPTION_TABLE]
    assert overlays
    assert all(len(fn.exceptions) == 1 for fn in overlays)
    assert all(validate_fspec(fn, Z) is None for fn in fns)
    # no-op overlays are dropped
    assert all(
        fn.exceptions[0][1] != abs(fn.exceptions[0][0].payload) for fn in overlays
    )


def test_phi_deg_family_contains_shifted_degree_with_unit_dip():
    family = FamilySpec(
        domain=P4,
        generator=GeneratorKind.PHI_DEG_PERTURBATIONS,
        budget=200000,
        max_value=4,
        max_degree=3,
        exception_budget=1,
    )
    fns = enumerate_family(family)
    wanted = EuclideanFnSpec.with_exceptions(
        EuclideanFnSpec.phi_deg((1, 2, 3, 4)), {P4.one(): 0}
    )
    assert wanted in fns


def test_family_enumeration_deterministic():
    a = enumerate_family(f4_tables(max_value=2))
    b = enumerate_family(f4_tables(max_value=2))
    assert a == b


# ---------------------------------------------------------------------------
# pipeline self-tests on fields
# ---------------------------------------------------------------------------


def test_search_f4_no_survivors():
    report = run_search(f4_tables(max_value=1), Window.whole())
    assert report.functions_examined == 8
    assert report.candidates == ()
    assert report.field_selftest_ok is True


def test_search_f5_no_survivors():
    family = FamilySpec(
        domain=F5,
        generator=GeneratorKind.ALL_FIELD_TABLES,
        budget=100000,
        max_value=3,
    )
    report = run_search(family, Window.whole())
    assert report.functions_examined == 256
    assert report.candidates == ()
    assert report.field_selftest_ok is True
    # every evaluation that reached refinement had exact values
    assert all(
        ev.refinement_all_exact in (None, True) for ev in report.evaluations
    )


def test_search_keeps_enumeration_order():
    report = run_search(f4_tables(max_value=1), Window.whole())
    fns = enumerate_family(f4_tables(max_value=1))
    assert tuple(ev.fn for ev in report.evaluations) == fns


def test_no_candidate_rests_on_upper_bounds():
    family = FamilySpec(
        domain=Z,
        generator=GeneratorKind.INTEGER_PERTURBATIONS,
        budget=40,
        max_value=8,
        magnitude=4,
        exception_budget=1,
    )
    report = run_search(family, Window.magnitude(6))
    for ev in report.candidates:
        assert ev.refinement_all_exact is not False
        assert ev.refined_ultra_verdict is Verdict.VIOLATED


# ---------------------------------------------------------------------------
# injected controls
# ---------------------------------------------------------------------------


def test_control_abs_rejected_at_ultra():
    report = verify_candidate(EuclideanFnSpec.abs_value(), Z, Window.magnitude(10))
    ev = report.evaluations[0]
    assert ev.stage == STAGE_ULTRA
    assert [e.payload for e in ev.rejection.witness.elements] == [1, 1]


def test_control_degree_rejected_at_strongly():
    report = verify_candidate(EuclideanFnSpec.degree(), P2, Window.max_degree(3))
    ev = report.evaluations[0]
    assert ev.stage == STAGE_STRONGLY
    assert ev.strongly_verdict is Verdict.NO_VIOLATION_FOUND


def test_control_f4_table_rejected_at_refined_ultra():
    fn = EuclideanFnSpec.field_table(
        {F4.one(): 0, F4.element(2): 1, F4.element(3): 1}
    )
    report = verify_candidate(fn, F4, Window.whole())
    ev = report.evaluations[0]
    assert ev.stage == STAGE_REFINED_ULTRA
    assert ev.strongly_verdict is Verdict.VIOLATED
    assert ev.ultra_verdict is Verdict.EXHAUSTIVELY_VERIFIED
    assert ev.refined_ultra_verdict is Verdict.EXHAUSTIVELY_VERIFIED


def test_paper_style_poly_function_escalation():
    fn = EuclideanFnSpec.with_exceptions(
        EuclideanFnSpec.phi_deg((1, 2, 3, 4, 5)), {P4.one(): 0}
    )
    small = verify_candidate(fn, P4, Window.max_degree(1))
    larger = verify_candidate(fn, P4, Window.max_degree(2))
    for report in (small, larger):
        ev = report.evaluations[0]
        assert ev.ultra_verdict is Verdict.NO_VIOLATION_FOUND
        assert ev.strongly_verdict is Verdict.VIOLATED
        assert ev.refinement_all_exact is True
        assert ev.stage == STAGE_REFINED_ULTRA  # refinement stays ultrametric


# ---------------------------------------------------------------------------
# determinism across thread counts
# ---------------------------------------------------------------------------


def _strip_elapsed(report):
    return (
        report.domain,
        report.window,
        report.candidates,
        report.evaluations,
        report.functions_examined,
        report.field_selftest_ok,
    )


def test_search_deterministic_across_thread_counts(monkeypatch):
    family = f4_tables(max_value=2)
    monkeypatch.setenv("EUCLID_LAB_THREADS", "1")
    sequential = run_search(family, Window.whole())
    monkeypatch.setenv("EUCLID_LAB_THREADS", "4")
    threaded = run_search(family, Window.whole())
    assert _strip_elapsed(sequential) == _strip_elapsed(threaded)


def test_worker_count_parsing(monkeypatch):
    monkeypatch.setenv("EUCLID_LAB_THREADS", "3")
    assert worker_count() == 3
    monkeypatch.setenv("EUCLID_LAB_THREADS", "0")
    assert worker_count() >= 1
    monkeypatch.setenv("EUCLID_LAB_THREADS", "junk")
    assert worker_count() == 1
