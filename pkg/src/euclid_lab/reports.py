"""JSON report envelope and converters for every result type.

The machine-readable schema is versioned as ``euclid-lab-report/1``.
Serialization is deterministic: keys are sorted, output is newline
terminated, and the volatile timing field defaults to null so that
identical invocations produce byte-identical output.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from .division import CandidateDivision, Decomposition, EnumerationResult
from .domains import DomainKind, DomainSpec, Element, Window
from .functions import EuclideanFnSpec, FnKind
from .properties import MatrixReport, PropertyReport, Witness
from .refinement import CertifiedValue, RefinementReports, RefinementTable
from .render import render_element
from .search import CandidateEvaluation, SearchReport

SCHEMA = "euclid-lab-report/1"


def element_to_dict(e: Element) -> dict:
    payload: Any = e.payload
    if isinstance(payload, tuple):
        payload = list(payload)
    return {"text": render_element(e), "payload": payload}


def domain_to_dict(d: DomainSpec) -> dict:
    return {
        "kind": d.kind.value,
        "d": d.d,
        "q": d.q,
        "precision": d.precision,
        "label": d.label(),
    }


def window_to_dict(w: Window, domain: DomainSpec | None = None) -> dict:
    out: dict[str, Any] = {"bound": w.bound}
    if domain is not None:
        out["describes"] = w.describe(domain)
    return out


def fn_to_dict(fn: EuclideanFnSpec | None) -> dict | None:
    if fn is None:
        return None
    out: dict[str, Any] = {"kind": fn.kind.value, "label": fn.label()}
    if fn.kind is FnKind.PHI_DEG:
        out["phi"] = list(fn.phi)
    elif fn.kind is FnKind.FIELD_TABLE:
        out["table"] = [[element_to_dict(e), v] for e, v in fn.table]
    elif fn.kind is FnKind.EXCEPTION_TABLE:
        out["base"] = fn_to_dict(fn.base)
        out["exceptions"] = [[element_to_dict(e), v] for e, v in fn.exceptions]
    return out


def division_to_dict(d: CandidateDivision) -> dict:
    return {
        "q": element_to_dict(d.q),
        "r": element_to_dict(d.r),
        "valid": d.valid,
    }


def enumeration_to_dict(res: EnumerationResult) -> dict:
    return {
        "divisions": [division_to_dict(d) for d in res.divisions],
        "complete": res.complete,
        "skipped": res.skipped,
    }


def witness_to_dict(w: Witness | None) -> dict | None:
    if w is None:
        return None
    return {
        "elements": [element_to_dict(e) for e in w.elements],
        "values": list(w.values),
        "note": w.note,
        "divisions": [division_to_dict(d) for d in w.divisions],
    }


def property_report_to_dict(rep: PropertyReport) -> dict:
    return {
        "property": rep.property.value,
        "domain": domain_to_dict(rep.domain),
        "fn": fn_to_dict(rep.fn),
        "window": window_to_dict(rep.window, rep.domain),
        "verdict": rep.verdict.value,
        "witness": witness_to_dict(rep.witness),
        "pairs_checked": rep.pairs_checked,
        "pairs_skipped": rep.pairs_skipped,
        "refined": rep.refined,
    }


def matrix_report_to_dict(rep: MatrixReport) -> dict:
    return {
        "euclidean": property_report_to_dict(rep.euclidean),
        "strongly": property_report_to_dict(rep.strongly),
        "ultra": property_report_to_dict(rep.ultra),
        "uniquely": property_report_to_dict(rep.uniquely),
        "contradictions": list(rep.contradictions),
        "inconclusive": list(rep.inconclusive),
        "derived_witness_note": rep.derived_witness_note,
        "consistent": rep.consistent,
    }


def certified_to_dict(cv: CertifiedValue) -> dict:
    return {
        "value": cv.value,
        "certainty": cv.certainty.value,
        "reason": cv.reason.value,
    }


def refinement_table_to_dict(table: RefinementTable) -> dict:
    return {
        "fn": fn_to_dict(table.fn),
        "domain": domain_to_dict(table.domain),
        "window": window_to_dict(table.window, table.domain),
        "values": [
            {"element": element_to_dict(e), **certified_to_dict(cv)}
            for e, cv in table.values
        ],
        "all_exact": table.all_exact,
    }


def refinement_reports_to_dict(reports: RefinementReports) -> dict:
    return {
        "table": refinement_table_to_dict(reports.table),
        "refined_strongly": property_report_to_dict(reports.refined_strongly),
        "refined_ultra": property_report_to_dict(reports.refined_ultra),
        "strongly_for_fn": property_report_to_dict(reports.strongly_for_fn),
        "fixed_point_holds": reports.fixed_point_holds,
        "fixed_point_compared": reports.fixed_point_compared,
        "fixed_point_skipped": reports.fixed_point_skipped,
        "contradictions": list(reports.contradictions),
    }


def decomposition_to_dict(d: Decomposition) -> dict:
    return {
        "base": element_to_dict(d.base),
        "coefficients": [element_to_dict(c) for c in d.coefficients],
    }


def evaluation_to_dict(ev: CandidateEvaluation) -> dict:
    return {
        "fn": fn_to_dict(ev.fn),
        "stage": ev.stage,
        "euclidean_verdict": ev.euclidean_verdict.value if ev.euclidean_verdict else None,
        "ultra_verdict": ev.ultra_verdict.value if ev.ultra_verdict else None,
        "strongly_verdict": ev.strongly_verdict.value if ev.strongly_verdict else None,
        "refinement_all_exact": ev.refinement_all_exact,
        "refined_ultra_verdict": (
            ev.refined_ultra_verdict.value if ev.refined_ultra_verdict else None
        ),
        "rejection_witness": (
            witness_to_dict(ev.rejection.witness) if ev.rejection else None
        ),
    }


def search_report_to_dict(rep: SearchReport, include_timing: bool = False) -> dict:
    return {
        "domain": domain_to_dict(rep.domain),
        "window": window_to_dict(rep.window, rep.domain),
        "candidates": [evaluation_to_dict(ev) for ev in rep.candidates],
        "evaluations": [evaluation_to_dict(ev) for ev in rep.evaluations],
        "functions_examined": rep.functions_examined,
        "field_selftest_ok": rep.field_selftest_ok,
        "elapsed": rep.elapsed if include_timing else None,
    }


# ---------------------------------------------------------------------------
# the envelope
# ---------------------------------------------------------------------------


@dataclass
class Report:
    command: list[str]
    result: dict
    witnesses: list = field(default_factory=list)
    timing: float | None = None
    schema: str = SCHEMA

    def to_dict(self) -> dict:
        return {
            "schema": self.schema,
            "command": list(self.command),
            "result": self.result,
            "witnesses": list(self.witnesses),
            "timing": self.timing,
        }

    @staticmethod
    def from_dict(d: dict) -> "Report":
        return Report(
            command=list(d["command"]),
            result=d["result"],
            witnesses=list(d["witnesses"]),
            timing=d["timing"],
            schema=d["schema"],
        )


def emit_json(report: Report) -> str:
    """Stable-key-ordered, newline-terminated JSON."""
    return json.dumps(report.to_dict(), sort_keys=True, separators=(", ", ": ")) + "\n"


def parse_json(text: str) -> Report:
    return Report.from_dict(json.loads(text))
