"""Manifest-driven batch verification.

Usage:
    sugra11-verify --manifest manifests/solution1.json
    sugra11-verify --manifest m.json --only name --format json
    sugra11-verify --manifest m.json --set c=-1 --eval "x1=1,x2=0,y1=0"

Exit codes: 0 all verdicts pass, 1 at least one verdict fails, 2 engine
or manifest error.  One background failing never aborts the batch.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Dict, List, Optional

from .cases import check_special_case
from .fieldeqs import (
    check_closedness,
    check_einstein,
    check_maxwell,
    flux_norm_sq,
    split_einstein,
)
from .manifest import BackgroundSpec, Manifest, ManifestError, parse_manifest
from .metric import CONVENTION_NOTES
from .report import CheckResult, VerificationReport
from .solutions import check_theorem_conditions

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_ERROR = 2


def run_background(spec: BackgroundSpec, coupling: Optional[Fraction] = None) -> VerificationReport:
    report = VerificationReport(background=spec.name)
    report.convention_notes.extend(CONVENTION_NOTES)
    bg = spec.background
    try:
        for check in spec.checks:
            if check == "closedness":
                report.results.append(check_closedness(bg))
            elif check == "maxwell":
                report.results.append(check_maxwell(bg))
            elif check == "einstein":
                report.results.append(check_einstein(bg))
            elif check == "norms":
                direct, block = flux_norm_sq(bg)
                result = CheckResult("norms")
                result.residuals["direct_minus_block"] = direct - block
                result.notes.append(f"|F|^2 = {direct}")
                report.results.append(result)
            elif check == "split":
                report.results.append(split_einstein(bg))
            elif check == "case":
                report.results.append(check_special_case(bg, spec.case, c=coupling))
            elif check == "theorem":
                t_report = check_theorem_conditions(bg, spec.theorem)
                report.results.append(t_report.hypotheses)
                if t_report.equations is not None:
                    report.results.extend(t_report.equations)
                if not t_report.reproduced:
                    report.error = "hypotheses hold but the field equations fail"
    except Exception as exc:  # noqa: BLE001 - carried into the report per background
        report.error = f"{type(exc).__name__}: {exc}"
    if report.error is None:
        for point in spec.eval_points:
            values = evaluate_report_at_points(report, point)
            report.evaluations.append(
                {"point": {k: str(v) for k, v in point.items()}, "values": values}
            )
    return report


def run(manifest: Manifest, only: Optional[str] = None, coupling: Optional[Fraction] = None):
    """Verify each background; returns (reports, exit code).

    Backgrounds are independent and verified concurrently; the report
    list stays in manifest order regardless of completion order.
    """
    specs = manifest.backgrounds
    if only is not None:
        specs = [s for s in specs if s.name == only]
        if not specs:
            raise ManifestError(f"no background named {only!r} in the manifest")
    if len(specs) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=min(4, len(specs))) as pool:
            reports = list(pool.map(lambda s: run_background(s, coupling), specs))
    else:
        reports = [run_background(spec, coupling) for spec in specs]
    if any(r.error for r in reports):
        code = EXIT_ERROR
    elif all(r.passed for r in reports):
        code = EXIT_PASS
    else:
        code = EXIT_FAIL
    return reports, code


def evaluate_report_at_points(
    report: VerificationReport, point: Dict[str, Fraction]
) -> Dict[str, str]:
    """Exact rational spot values of every nonzero residual polynomial."""
    from .polyring import parse_polynomial

    values = {}
    for result in report.results:
        for where, text in result.nonzero_entries():
            poly = parse_polynomial(text)
            try:
                value = poly.evaluate(point)
            except KeyError as exc:
                raise ManifestError(
                    f"evaluation point misses a variable for {where}: {exc}"
                ) from exc
            values[f"{result.name}:{where}"] = str(value)
    return values


def render_text(reports: List[VerificationReport], eval_point=None) -> str:
    lines = []
    for report in reports:
        lines.append(f"background {report.background}")
        if report.error:
            lines.append(f"  ERROR: {report.error}")
        for result in report.results:
            status = "SKIP" if result.skipped else ("PASS" if result.passed else "FAIL")
            lines.append(f"  {result.name}: {status}")
            for where, value in result.nonzero_entries():
                lines.append(f"    residual {where} = {value}")
            for note in result.notes:
                lines.append(f"    note: {note}")
        for record in report.evaluations:
            point_str = ", ".join(f"{k}={v}" for k, v in record["point"].items())
            for key, value in record["values"].items():
                lines.append(f"  eval[{point_str}] {key} = {value}")
        if eval_point is not None and not report.error:
            for key, value in evaluate_report_at_points(report, eval_point).items():
                lines.append(f"  eval {key} = {value}")
    passed = sum(1 for r in reports if r.passed and not r.error)
    failed = sum(1 for r in reports if not r.passed and not r.error)
    errored = sum(1 for r in reports if r.error)
    lines.append(f"summary: {passed} passed, {failed} failed, {errored} errored")
    lines.append("conventions:")
    for note in CONVENTION_NOTES:
        lines.append(f"  - {note}")
    return "\n".join(lines)


def render_json(reports: List[VerificationReport], eval_point=None) -> str:
    doc = {
        "schema": 1,
        "backgrounds": [r.to_dict() for r in reports],
        "summary": {
            "passed": sum(1 for r in reports if r.passed and not r.error),
            "failed": sum(1 for r in reports if not r.passed and not r.error),
            "errored": sum(1 for r in reports if r.error),
        },
    }
    if eval_point is not None:
        doc["evaluations"] = {
            r.background: evaluate_report_at_points(r, eval_point)
            for r in reports
            if not r.error
        }
    return json.dumps(doc, indent=2)


def _parse_point(spec: str) -> Dict[str, Fraction]:
    point = {}
    for piece in spec.split(","):
        piece = piece.strip()
        if not piece:
            continue
        if "=" not in piece:
            raise ManifestError(f"bad point assignment {piece!r}; expected var=value")
        name, value = piece.split("=", 1)
        try:
            point[name.strip()] = Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ManifestError(f"bad rational {value!r} in point spec") from exc
    if not point:
        raise ManifestError("empty evaluation point")
    return point


def _parse_set(spec: str) -> Fraction:
    if not spec.startswith("c="):
        raise ManifestError(f"--set expects c=<rational>, got {spec!r}")
    try:
        value = Fraction(spec[2:])
    except (ValueError, ZeroDivisionError) as exc:
        raise ManifestError(f"bad rational in {spec!r}") from exc
    if value == 0:
        raise ManifestError("the coupling constant must be nonzero")
    return value


def main(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="sugra11-verify",
        description="Verify 11-dimensional product backgrounds from a JSON manifest.",
    )
    parser.add_argument("--manifest", required=True, help="path to the manifest JSON")
    parser.add_argument("--only", help="run a single background by name")
    parser.add_argument("--format", choices=("text", "json"), help="report format")
    parser.add_argument("--set", dest="set_spec", help="override the coupling, e.g. c=-1")
    parser.add_argument("--eval", dest="eval_spec", help="spot-evaluate residuals, e.g. x1=1,y1=0")
    args = parser.parse_args(argv)

    try:
        manifest = parse_manifest(args.manifest)
        coupling = _parse_set(args.set_spec) if args.set_spec else None
        eval_point = _parse_point(args.eval_spec) if args.eval_spec else None
        reports, code = run(manifest, only=args.only, coupling=coupling)
        fmt = args.format or manifest.report_format
        text = (
            render_json(reports, eval_point)
            if fmt == "json"
            else render_text(reports, eval_point)
        )
        print(text)
        return code
    except (ManifestError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
