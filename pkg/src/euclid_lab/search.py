"""Systematic search for a counterexample to the refinement question:
a function whose ultrametric bound survives while multiplicative growth
fails, and whose refinement loses the ultrametric bound.

The pipeline filters each generated function through four stages:

1. must be Euclidean on the window (discard on violation);
2. must have no ultrametric violation;
3. must have a multiplicative-growth violation (a globally valid one);
4. the refined function, built from exact certificates only, must have
   an ultrametric violation.

Stage 4 survivors would be counterexample candidates.  On finite
fields the refinement is constant, so the survivor set is provably
empty there; those families run anyway, as a self-test of the filters.
"""

from __future__ import annotations

import itertools
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

from .domains import DomainKind, DomainSpec, Element, Window, enumerate_nonzero
from .errors import BudgetZero, EuclidLabError
from .functions import EuclideanFnSpec, FnKind, validate_fspec
from .properties import (
    PropertyKind,
    PropertyReport,
    Verdict,
    check_property,
)
from .refinement import check_refinement_properties


class GeneratorKind(Enum):
    ALL_FIELD_TABLES = "all_field_tables"
    PHI_DEG_PERTURBATIONS = "phi_deg_perturbations"
    INTEGER_PERTURBATIONS = "integer_perturbations"


@dataclass(frozen=True)
class FamilySpec:
    """A generated family of candidate functions on one domain."""

    domain: DomainSpec
    generator: GeneratorKind
    budget: int
    max_value: int
    max_degree: int | None = None
    magnitude: int | None = None
    exception_budget: int = 1

    def __post_init__(self) -> None:
        if self.generator is GeneratorKind.ALL_FIELD_TABLES:
            if self.domain.kind is not DomainKind.FINITE_FIELD:
                raise EuclidLabError("field-table families need a finite field")
        elif self.generator is GeneratorKind.PHI_DEG_PERTURBATIONS:
            if self.domain.kind is not DomainKind.POLY:
                raise EuclidLabError("phi-deg families need a polynomial ring")
            if self.max_degree is None or self.max_degree < 0:
                raise EuclidLabError("phi-deg families need a max degree")
        else:
            if self.domain.kind is not DomainKind.INTEGERS:
                raise EuclidLabError("perturbed-absolute-value families need Z")
            if self.magnitude is None or self.magnitude < 1:
                raise EuclidLabError("integer families need a magnitude")


def enumerate_family(family: FamilySpec) -> tuple[EuclideanFnSpec, ...]:
    """Deterministic, deduplicated listing, truncated at the budget."""
    if family.budget <= 0:
        raise BudgetZero("family budget must be positive")
    out: list[EuclideanFnSpec] = []
    seen: set[EuclideanFnSpec] = set()
    for fn in _generate(family):
        if fn in seen:
            continue
        problem = validate_fspec(fn, family.domain)
        if problem is not None:
            raise EuclidLabError(f"generator produced an invalid spec: {problem}")
        seen.add(fn)
        out.append(fn)
        if len(out) >= family.budget:
            break
    return tuple(out)


def _generate(family: FamilySpec):
    domain = family.domain
    if family.generator is GeneratorKind.ALL_FIELD_TABLES:
        elems = enumerate_nonzero(domain, Window.whole())
        for values in itertools.product(
            range(family.max_value + 1), repeat=len(elems)
        ):
            yield EuclideanFnSpec.field_table(dict(zip(elems, values)))
        return

    if family.generator is GeneratorKind.PHI_DEG_PERTURBATIONS:
        # the exception pool is the unit group: nonzero constants
        pool = [domain.element((c,)) for c in range(1, domain.q)]
        for phi in itertools.combinations(
            range(family.max_value + 1), family.max_degree + 1
        ):
            base = EuclideanFnSpec.phi_deg(phi)
            yield base
            yield from _perturbations(
                base, pool, family.exception_budget, family.max_value,
                base_value=lambda e, phi=phi: phi[0],
            )
        return

    base = EuclideanFnSpec.abs_value()
    pool = list(enumerate_nonzero(domain, Window.magnitude(family.magnitude)))
    yield base
    yield from _perturbations(
        base, pool, family.exception_budget, family.max_value,
        base_value=lambda e: abs(e.payload),
    )


def _perturbations(base, pool, exception_budget, max_value, base_value):
    for k in range(1, exception_budget + 1):
        for targets in itertools.combinations(pool, k):
            for values in itertools.product(range(max_value + 1), repeat=k):
                mapping = {
                    e: v for e, v in zip(targets, values) if v != base_value(e)
                }
                if len(mapping) != k:
                    continue  # no-op or partially redundant overlay
                yield EuclideanFnSpec.with_exceptions(base, mapping)


# ---------------------------------------------------------------------------
# the filter pipeline
# ---------------------------------------------------------------------------

STAGE_EUCLIDEAN = "euclidean"
STAGE_ULTRA = "ultra"
STAGE_STRONGLY = "strongly_violation_required"
STAGE_REFINED_ULTRA = "refined_ultra"
STAGE_SURVIVOR = "survivor"


@dataclass(frozen=True)
class CandidateEvaluation:
    fn: EuclideanFnSpec
    stage: str  # the stage that rejected it, or "survivor"
    euclidean_verdict: Verdict | None = None
    ultra_verdict: Verdict | None = None
    strongly_verdict: Verdict | None = None
    refinement_all_exact: bool | None = None
    refined_ultra_verdict: Verdict | None = None
    rejection: PropertyReport | None = None

    @property
    def survived(self) -> bool:
        return self.stage == STAGE_SURVIVOR


@dataclass(frozen=True)
class SearchReport:
    domain: DomainSpec
    window: Window
    candidates: tuple[CandidateEvaluation, ...]
    evaluations: tuple[CandidateEvaluation, ...]
    functions_examined: int
    field_selftest_ok: bool | None
    elapsed: float


def _evaluate_candidate(
    fn: EuclideanFnSpec, domain: DomainSpec, window: Window
) -> CandidateEvaluation:
    euclidean = check_property(PropertyKind.EUCLIDEAN, fn, domain, window)
    if euclidean.verdict is Verdict.VIOLATED:
        return CandidateEvaluation(
            fn=fn,
            stage=STAGE_EUCLIDEAN,
            euclidean_verdict=euclidean.verdict,
            rejection=euclidean,
        )
    ultra = check_property(PropertyKind.ULTRA_EUCLIDEAN, fn, domain, window)
    if ultra.verdict is Verdict.VIOLATED:
        return CandidateEvaluation(
            fn=fn,
            stage=STAGE_ULTRA,
            euclidean_verdict=euclidean.verdict,
            ultra_verdict=ultra.verdict,
            rejection=ultra,
        )
    strongly = check_property(PropertyKind.STRONGLY_EUCLIDEAN, fn, domain, window)
    if strongly.verdict is not Verdict.VIOLATED:
        return CandidateEvaluation(
            fn=fn,
            stage=STAGE_STRONGLY,
            euclidean_verdict=euclidean.verdict,
            ultra_verdict=ultra.verdict,
            strongly_verdict=strongly.verdict,
            rejection=strongly,
        )
    refinement = check_refinement_properties(fn, domain, window)
    refined_ultra = refinement.refined_ultra
    stage = (
        STAGE_SURVIVOR
        if refined_ultra.verdict is Verdict.VIOLATED
        else STAGE_REFINED_ULTRA
    )
    return CandidateEvaluation(
        fn=fn,
        stage=stage,
        euclidean_verdict=euclidean.verdict,
        ultra_verdict=ultra.verdict,
        strongly_verdict=strongly.verdict,
        refinement_all_exact=refinement.table.all_exact,
        refined_ultra_verdict=refined_ultra.verdict,
        rejection=None if stage == STAGE_SURVIVOR else refined_ultra,
    )


def worker_count() -> int:
    """Thread cap from EUCLID_LAB_THREADS; 0 or unset means automatic."""
    raw = os.environ.get("EUCLID_LAB_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        return 1
    if n < 0:
        return 1
    if n == 0:
        return min(8, os.cpu_count() or 1)
    return n


def run_search(family: FamilySpec, window: Window) -> SearchReport:
    """Filter every function in the family; survivors are candidate
    counterexamples.

    Candidates are processed independently; the report lists them in
    enumeration order, so the output does not depend on the schedule.
    """
    start = time.monotonic()
    fns = enumerate_family(family)
    domain = family.domain
    workers = worker_count()
    if workers > 1 and len(fns) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            evaluations = tuple(
                pool.map(lambda f: _evaluate_candidate(f, domain, window), fns)
            )
    else:
        evaluations = tuple(_evaluate_candidate(f, domain, window) for f in fns)
    survivors = tuple(ev for ev in evaluations if ev.survived)
    selftest = (len(survivors) == 0) if domain.is_field else None
    return SearchReport(
        domain=domain,
        window=window,
        candidates=survivors,
        evaluations=evaluations,
        functions_examined=len(fns),
        field_selftest_ok=selftest,
        elapsed=time.monotonic() - start,
    )


def verify_candidate(
    fn: EuclideanFnSpec, domain: DomainSpec, larger_window: Window
) -> SearchReport:
    """Re-run the full filter pipeline for one function at a larger
    window; a candidate that survives escalation is emitted with its
    witness data for manual study."""
    start = time.monotonic()
    evaluation = _evaluate_candidate(fn, domain, larger_window)
    survivors = (evaluation,) if evaluation.survived else ()
    selftest = (len(survivors) == 0) if domain.is_field else None
    return SearchReport(
        domain=domain,
        window=larger_window,
        candidates=survivors,
        evaluations=(evaluation,),
        functions_examined=1,
        field_selftest_ok=selftest,
        elapsed=time.monotonic() - start,
    )
