"""Command-line front end.

Exit codes: 0 success or verified; 1 violation found (for check and
matrix a violation is a successful finding, but scripts still get a
nonzero code to branch on); 2 usage or configuration error;
3 inconclusive (skipped pairs, incomplete enumerations, or refinements
that are only upper bounds).
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import reports as rep
from .division import (
    Decomposition,
    canonical_divide,
    decompose_by,
    enumerate_valid_divisions,
    gcd_extended,
)
from .domains import DomainKind, DomainSpec, Window, enumerate_nonzero
from .errors import (
    DecompositionError,
    DivisionByZero,
    EuclidLabError,
    ParseError,
    PrecisionExhausted,
    WindowRequired,
)
from .functions import EuclideanFnSpec, default_fn, validate_fspec
from .properties import (
    MatrixReport,
    PropertyKind,
    PropertyReport,
    Verdict,
    check_property,
    check_unit_lemmas,
    theorem_matrix,
    unit_field_closure,
)
from .refinement import check_refinement_properties, refine_eval
from .render import render_division, render_element
from .search import FamilySpec, GeneratorKind, run_search
from .reports import Report

DEFAULT_WINDOWS = {
    DomainKind.INTEGERS: 50,
    DomainKind.QUADRATIC: 20,
    DomainKind.POLY: 6,
}

_DOMAIN_NAMES = {
    "z": "integers",
    "int": "integers",
    "integers": "integers",
    "quad": "quadratic",
    "quadratic": "quadratic",
    "gf": "finite_field",
    "field": "finite_field",
    "poly": "poly",
    "series": "series",
}

_PROPERTIES = {
    "euclidean": PropertyKind.EUCLIDEAN,
    "strongly": PropertyKind.STRONGLY_EUCLIDEAN,
    "ultra": PropertyKind.ULTRA_EUCLIDEAN,
    "uniquely": PropertyKind.UNIQUELY_EUCLIDEAN,
    "unit-equality": PropertyKind.UNIT_EQUALITY,
    "min-at-units": PropertyKind.MIN_AT_UNITS,
    "unit-closure": PropertyKind.UNIT_FIELD_CLOSURE,
}

_GENERATORS = {
    "all_field_tables": GeneratorKind.ALL_FIELD_TABLES,
    "phi_deg_perturbations": GeneratorKind.PHI_DEG_PERTURBATIONS,
    "integer_perturbations": GeneratorKind.INTEGER_PERTURBATIONS,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="euclid-lab",
        description=(
            "Exact division laboratory for Euclidean rings: enumerate valid "
            "divisions, check division-theoretic predicates over finite "
            "windows, refine size functions, and search for counterexample "
            "candidates."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, fn: bool = True, window: bool = True):
        p.add_argument(
            "--domain",
            required=True,
            help="Z | quad | gf | poly | series",
        )
        p.add_argument("--d", type=int, help="quadratic ring parameter")
        p.add_argument("--q", type=int, help="base field size (2,3,4,5,7)")
        p.add_argument("--T", type=int, dest="precision", help="series precision")
        if window:
            p.add_argument("--max", type=int, help="magnitude bound (Z, quad)")
            p.add_argument("--max-deg", type=int, help="degree bound (poly)")
        if fn:
            p.add_argument(
                "--fn",
                help="abs | deg | ord | norm | phi-deg | table "
                "(default: the domain's classical function)",
            )
            p.add_argument("--phi", help="comma list for phi-deg, e.g. 0,1,2,3")
            p.add_argument(
                "--table",
                help="field table, e.g. 1:0,a:1,b:1 "
                "(GF(4) elements are written a and b)",
            )
            p.add_argument(
                "--exceptions",
                help="finite overrides layered on --fn, e.g. 3:9,-3:9",
            )
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument(
            "--timing", action="store_true", help="include wall time in reports"
        )

    p = sub.add_parser("divide", help="canonical division under the default size")
    common(p, fn=False, window=False)
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)

    p = sub.add_parser("enumerate", help="list every valid division of a by b")
    common(p)
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)

    p = sub.add_parser("gcd", help="extended gcd by iterated canonical division")
    common(p, fn=False, window=False)
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)

    p = sub.add_parser("check", help="scan a window for predicate violations")
    common(p)
    p.add_argument(
        "--property",
        required=True,
        choices=sorted(_PROPERTIES),
    )
    p.add_argument(
        "--all-violations",
        action="store_true",
        help="collect every violation instead of the first",
    )

    p = sub.add_parser("matrix", help="all four predicates plus consistency flags")
    common(p)

    p = sub.add_parser("refine", help="refined size values with certificates")
    common(p)
    p.add_argument("--a", help="single element (default: the whole window)")

    p = sub.add_parser("decompose", help="write a as a polynomial in a base element")
    common(p, window=False)
    p.add_argument("--a", required=True)
    p.add_argument("--base", required=True)

    p = sub.add_parser("search", help="run a counterexample search campaign")
    p.add_argument("--config", required=True, help="TOML or JSON campaign file")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--timing", action="store_true")
    return parser


# ---------------------------------------------------------------------------
# argument assembly
# ---------------------------------------------------------------------------


def _build_domain(args) -> DomainSpec:
    name = _DOMAIN_NAMES.get(args.domain.lower())
    if name is None:
        raise ParseError(f"unknown domain {args.domain!r}")
    if name == "integers":
        return DomainSpec.integers()
    if name == "quadratic":
        if args.d is None:
            raise ParseError("quadratic domains need --d")
        return DomainSpec.quadratic(args.d)
    if args.q is None:
        raise ParseError(f"{args.domain} domains need --q")
    if name == "finite_field":
        return DomainSpec.finite_field(args.q)
    if name == "poly":
        return DomainSpec.poly(args.q)
    if args.precision is None:
        raise ParseError("series domains need --T")
    return DomainSpec.series(args.q, args.precision)


def _build_window(args, domain: DomainSpec) -> tuple[Window, bool]:
    """Window plus a flag saying whether a heuristic default was used."""
    k = domain.kind
    if k in (DomainKind.INTEGERS, DomainKind.QUADRATIC):
        m = getattr(args, "max", None)
        if m is not None:
            return Window.magnitude(m), False
        return Window.magnitude(DEFAULT_WINDOWS[k]), True
    if k is DomainKind.POLY:
        d = getattr(args, "max_deg", None)
        if d is not None:
            return Window.max_degree(d), False
        return Window.max_degree(DEFAULT_WINDOWS[k]), True
    return Window.whole(), False


def _parse_value_map(domain: DomainSpec, text: str) -> dict:
    from .render import parse_element

    mapping = {}
    for chunk in text.split(","):
        key, sep, value = chunk.rpartition(":")
        if not sep:
            raise ParseError(f"expected element:value, got {chunk!r}")
        mapping[parse_element(domain, key)] = int(value)
    return mapping


def _build_fn(args, domain: DomainSpec) -> EuclideanFnSpec:
    name = getattr(args, "fn", None)
    if name is None:
        if domain.is_field:
            if getattr(args, "table", None):
                fn = EuclideanFnSpec.field_table(
                    _parse_value_map(domain, args.table)
                )
                return _overlay(args, domain, fn)
            raise ParseError("finite fields need --fn table with --table")
        fn = default_fn(domain)
        return _overlay(args, domain, fn)
    name = name.lower().replace("_", "-")
    if name == "abs":
        fn = EuclideanFnSpec.abs_value()
    elif name == "deg":
        fn = EuclideanFnSpec.degree()
    elif name == "ord":
        fn = EuclideanFnSpec.order()
    elif name == "norm":
        fn = EuclideanFnSpec.quad_norm()
    elif name == "phi-deg":
        if not getattr(args, "phi", None):
            raise ParseError("--fn phi-deg needs --phi")
        fn = EuclideanFnSpec.phi_deg(int(v) for v in args.phi.split(","))
    elif name == "table":
        if not getattr(args, "table", None):
            raise ParseError("--fn table needs --table")
        fn = EuclideanFnSpec.field_table(_parse_value_map(domain, args.table))
    else:
        raise ParseError(f"unknown size function {name!r}")
    return _overlay(args, domain, fn)


def _overlay(args, domain: DomainSpec, fn: EuclideanFnSpec) -> EuclideanFnSpec:
    if getattr(args, "exceptions", None):
        fn = EuclideanFnSpec.with_exceptions(
            fn, _parse_value_map(domain, args.exceptions)
        )
    problem = validate_fspec(fn, domain)
    if problem is not None:
        raise ParseError(str(problem))
    if not fn.compatible_with(domain):
        raise ParseError(f"{fn.label()} does not apply to {domain.label()}")
    return fn


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


class _Out:
    def __init__(self, args, argv):
        self.format = args.format
        self.argv = list(argv)
        self.timing = args.timing
        self.started = time.monotonic()
        self.lines: list[str] = []

    def text(self, line: str = "") -> None:
        self.lines.append(line)

    def finish(self, result: dict, witnesses: list, exit_code: int) -> int:
        elapsed = time.monotonic() - self.started
        if self.format == "json":
            report = Report(
                command=self.argv,
                result=result,
                witnesses=witnesses,
                timing=elapsed if self.timing else None,
            )
            sys.stdout.write(rep.emit_json(report))
        else:
            for line in self.lines:
                print(line)
            if self.timing:
                print(f"elapsed: {elapsed:.3f}s")
        return exit_code


def _witnesses_of(*reports_: PropertyReport) -> list:
    out = []
    for r in reports_:
        if r.witness is not None:
            out.append(rep.witness_to_dict(r.witness))
    return out


def _report_exit(*reports_: PropertyReport) -> int:
    if any(r.verdict is Verdict.VIOLATED for r in reports_):
        return 1
    if any(r.verdict is Verdict.NOT_APPLICABLE for r in reports_):
        return 3
    if any(r.pairs_skipped > 0 for r in reports_):
        return 3
    return 0


def _describe_report(out: _Out, r: PropertyReport) -> None:
    name = r.property.value + (" (of the refinement)" if r.refined else "")
    out.text(f"{name}: {r.verdict.value}")
    if r.witness is not None:
        w = r.witness
        elems = ", ".join(render_element(e) for e in w.elements)
        values = f" values {list(w.values)}" if w.values else ""
        out.text(f"  witness: ({elems}){values}: {w.note}")
        for d in w.divisions:
            out.text("    " + render_division(w.elements[0], w.elements[1], d.q, d.r))
    out.text(
        f"  pairs checked: {r.pairs_checked}, skipped: {r.pairs_skipped}"
    )


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_divide(args, out: _Out) -> int:
    from .render import parse_element

    domain = _build_domain(args)
    a = parse_element(domain, args.a)
    b = parse_element(domain, args.b)
    q, r = canonical_divide(domain, a, b)
    out.text(render_division(a, b, q, r))
    out.text(f"q = {render_element(q)}")
    out.text(f"r = {render_element(r)}")
    result = {
        "domain": rep.domain_to_dict(domain),
        "a": rep.element_to_dict(a),
        "b": rep.element_to_dict(b),
        "q": rep.element_to_dict(q),
        "r": rep.element_to_dict(r),
    }
    return out.finish(result, [], 0)


def _cmd_enumerate(args, out: _Out) -> int:
    from .render import parse_element

    domain = _build_domain(args)
    fn = _build_fn(args, domain)
    window, defaulted = _build_window(args, domain)
    a = parse_element(domain, args.a)
    b = parse_element(domain, args.b)
    res = enumerate_valid_divisions(fn, a, b, window=window)
    for d in res.divisions:
        out.text(render_division(a, b, d.q, d.r))
    out.text(
        f"{len(res.divisions)} valid division(s); complete: {res.complete}; "
        f"candidates skipped: {res.skipped}"
    )
    if defaulted and not res.complete:
        out.text(f"note: heuristic default window in use ({window.describe(domain)})")
    result = {
        "domain": rep.domain_to_dict(domain),
        "fn": rep.fn_to_dict(fn),
        "window": rep.window_to_dict(window, domain),
        "window_defaulted": defaulted,
        "a": rep.element_to_dict(a),
        "b": rep.element_to_dict(b),
        "enumeration": rep.enumeration_to_dict(res),
    }
    return out.finish(result, [], 0 if res.complete else 3)


def _cmd_gcd(args, out: _Out) -> int:
    from .render import parse_element

    domain = _build_domain(args)
    a = parse_element(domain, args.a)
    b = parse_element(domain, args.b)
    g, s, t = gcd_extended(domain, a, b)
    out.text(f"g = {render_element(g)}")
    out.text(
        f"g = ({render_element(s)})*({render_element(a)}) + "
        f"({render_element(t)})*({render_element(b)})"
    )
    result = {
        "domain": rep.domain_to_dict(domain),
        "a": rep.element_to_dict(a),
        "b": rep.element_to_dict(b),
        "g": rep.element_to_dict(g),
        "s": rep.element_to_dict(s),
        "t": rep.element_to_dict(t),
    }
    return out.finish(result, [], 0)


def _cmd_check(args, out: _Out) -> int:
    domain = _build_domain(args)
    window, defaulted = _build_window(args, domain)
    prop = _PROPERTIES[args.property]
    if prop is PropertyKind.UNIT_FIELD_CLOSURE:
        report = unit_field_closure(domain, window)
    elif prop in (PropertyKind.UNIT_EQUALITY, PropertyKind.MIN_AT_UNITS):
        fn = _build_fn(args, domain)
        equality, minimum = check_unit_lemmas(fn, domain, window)
        report = equality if prop is PropertyKind.UNIT_EQUALITY else minimum
    else:
        fn = _build_fn(args, domain)
        report = check_property(
            prop, fn, domain, window, all_violations=args.all_violations
        )
    _describe_report(out, report)
    if defaulted:
        out.text(f"note: heuristic default window ({window.describe(domain)})")
    result = {
        "report": rep.property_report_to_dict(report),
        "window_defaulted": defaulted,
    }
    if args.all_violations and report.all_witnesses:
        result["all_witnesses"] = [
            rep.witness_to_dict(w) for w in report.all_witnesses
        ]
    return out.finish(result, _witnesses_of(report), _report_exit(report))


def _cmd_matrix(args, out: _Out) -> int:
    domain = _build_domain(args)
    fn = _build_fn(args, domain)
    window, defaulted = _build_window(args, domain)
    matrix = theorem_matrix(fn, domain, window)
    for r in matrix.reports():
        _describe_report(out, r)
    if matrix.contradictions:
        for c in matrix.contradictions:
            out.text(f"CONTRADICTION: {c}")
    for note in matrix.inconclusive:
        out.text(f"inconclusive: {note}")
    if matrix.derived_witness_note:
        out.text(f"note: {matrix.derived_witness_note}")
    if defaulted:
        out.text(f"note: heuristic default window ({window.describe(domain)})")
    result = {
        "matrix": rep.matrix_report_to_dict(matrix),
        "window_defaulted": defaulted,
    }
    exit_code = (
        1
        if matrix.contradictions
        or any(r.verdict is Verdict.VIOLATED for r in matrix.reports())
        else (3 if any(r.pairs_skipped for r in matrix.reports()) else 0)
    )
    return out.finish(result, _witnesses_of(*matrix.reports()), exit_code)


def _cmd_refine(args, out: _Out) -> int:
    from .render import parse_element

    domain = _build_domain(args)
    fn = _build_fn(args, domain)
    window, defaulted = _build_window(args, domain)
    if args.a is not None:
        a = parse_element(domain, args.a)
        cv = refine_eval(fn, a, window=window)
        out.text(
            f"refined({render_element(a)}) = {cv.value} "
            f"[{cv.certainty.value}: {cv.reason.value}]"
        )
        result = {
            "domain": rep.domain_to_dict(domain),
            "fn": rep.fn_to_dict(fn),
            "element": rep.element_to_dict(a),
            "refined": rep.certified_to_dict(cv),
        }
        return out.finish(result, [], 0 if cv.exact else 3)
    reports = check_refinement_properties(fn, domain, window)
    for e, cv in reports.table.values:
        out.text(
            f"refined({render_element(e)}) = {cv.value} "
            f"[{cv.certainty.value}: {cv.reason.value}]"
        )
    out.text(f"all exact: {reports.table.all_exact}")
    _describe_report(out, reports.refined_strongly)
    _describe_report(out, reports.refined_ultra)
    out.text(
        f"fixed point (refinement equals the function): {reports.fixed_point_holds} "
        f"({reports.fixed_point_compared} compared, "
        f"{reports.fixed_point_skipped} skipped)"
    )
    for c in reports.contradictions:
        out.text(f"CONTRADICTION: {c}")
    if defaulted:
        out.text(f"note: heuristic default window ({window.describe(domain)})")
    result = {
        "refinement": rep.refinement_reports_to_dict(reports),
        "window_defaulted": defaulted,
    }
    return out.finish(
        result,
        _witnesses_of(reports.refined_strongly, reports.refined_ultra),
        0 if reports.table.all_exact else 3,
    )


def _cmd_decompose(args, out: _Out) -> int:
    from .render import parse_element

    domain = _build_domain(args)
    fn = _build_fn(args, domain)
    a = parse_element(domain, args.a)
    base = parse_element(domain, args.base)
    decomp = decompose_by(fn, a, base)
    coeffs = ", ".join(render_element(c) for c in decomp.coefficients)
    out.text(f"coefficients (low to high): {coeffs}")
    out.text(
        f"{render_element(a)} reconstructed from {len(decomp.coefficients)} "
        f"coefficient(s) in base {render_element(base)}"
    )
    result = {
        "domain": rep.domain_to_dict(domain),
        "fn": rep.fn_to_dict(fn),
        "a": rep.element_to_dict(a),
        "decomposition": rep.decomposition_to_dict(decomp),
    }
    return out.finish(result, [], 0)


def _load_config(path: str) -> dict:
    with open(path, "rb") as fh:
        data = fh.read()
    if path.endswith(".json"):
        return json.loads(data)
    try:
        import tomllib  # Python 3.11+
    except ImportError:
        import tomli as tomllib
    try:
        return tomllib.loads(data.decode())
    except Exception:
        return json.loads(data)


def _family_from_config(cfg: dict) -> tuple[FamilySpec, Window]:
    dom_cfg = cfg.get("domain", {})
    kind = _DOMAIN_NAMES.get(str(dom_cfg.get("kind", "")).lower())
    if kind == "integers":
        domain = DomainSpec.integers()
    elif kind == "quadratic":
        domain = DomainSpec.quadratic(dom_cfg["d"])
    elif kind == "finite_field":
        domain = DomainSpec.finite_field(dom_cfg["q"])
    elif kind == "poly":
        domain = DomainSpec.poly(dom_cfg["q"])
    elif kind == "series":
        domain = DomainSpec.series(dom_cfg["q"], dom_cfg["precision"])
    else:
        raise ParseError(f"unknown domain kind in config: {dom_cfg.get('kind')!r}")
    fam_cfg = cfg.get("family", {})
    generator = _GENERATORS.get(str(fam_cfg.get("generator", "")).lower())
    if generator is None:
        raise ParseError(f"unknown generator {fam_cfg.get('generator')!r}")
    family = FamilySpec(
        domain=domain,
        generator=generator,
        budget=int(fam_cfg.get("budget", 10000)),
        max_value=int(fam_cfg.get("max_value", 3)),
        max_degree=fam_cfg.get("max_degree"),
        magnitude=fam_cfg.get("magnitude"),
        exception_budget=int(fam_cfg.get("exception_budget", 1)),
    )
    win_cfg = cfg.get("window", {})
    window = Window(bound=win_cfg.get("bound"))
    return family, window


def _cmd_search(args, out: _Out) -> int:
    family, window = _family_from_config(_load_config(args.config))
    report = run_search(family, window)
    tally: dict[str, int] = {}
    for ev in report.evaluations:
        tally[ev.stage] = tally.get(ev.stage, 0) + 1
    out.text(f"functions examined: {report.functions_examined}")
    for stage in sorted(tally):
        out.text(f"  {stage}: {tally[stage]}")
    out.text(f"surviving candidates: {len(report.candidates)}")
    for ev in report.candidates:
        out.text(f"  {ev.fn.label()}")
    if report.field_selftest_ok is not None:
        out.text(f"field self-test (no survivors expected): {report.field_selftest_ok}")
    inexact = any(
        ev.refinement_all_exact is False
        for ev in report.evaluations
        if ev.refinement_all_exact is not None
    )
    result = {"search": rep.search_report_to_dict(report, include_timing=args.timing)}
    exit_code = 1 if report.candidates else (3 if inexact else 0)
    return out.finish(result, [], exit_code)


_COMMANDS = {
    "divide": _cmd_divide,
    "enumerate": _cmd_enumerate,
    "gcd": _cmd_gcd,
    "check": _cmd_check,
    "matrix": _cmd_matrix,
    "refine": _cmd_refine,
    "decompose": _cmd_decompose,
    "search": _cmd_search,
}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    out = _Out(args, argv)
    try:
        return _COMMANDS[args.command](args, out)
    except DecompositionError as exc:
        _diagnostic(exc)
        return 1
    except (WindowRequired, PrecisionExhausted) as exc:
        _diagnostic(exc)
        return 3
    except (ParseError, DivisionByZero, FileNotFoundError, KeyError) as exc:
        _diagnostic(exc)
        return 2
    except EuclidLabError as exc:
        _diagnostic(exc)
        return 2


def _diagnostic(exc: Exception) -> None:
    payload = {"error": type(exc).__name__, "message": str(exc)}
    sys.stderr.write(json.dumps(payload, sort_keys=True) + "\n")


if __name__ == "__main__":
    sys.exit(main())
