"""Manifest parsing, validation, and serialization.

A manifest is a JSON document declaring charts, metrics (dense
lower-triangular polynomial strings with a mandatory signature), forms
(component terms indexed by coordinate names), warped products, and
backgrounds (a product reference, a flux ansatz of form references, and
the list of checks to run).  Every polynomial is a string in the exact
rational grammar; nothing in the pipeline is floating point.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional

from .exterior import Chart, DifferentialForm
from .fieldeqs import BASE_PIECES, FIBER_PIECES, Background, FluxAnsatz, assemble_flux
from .metric import ChartMetric, make_metric
from .polyring import Polynomial, PolynomialGrammarError, parse_polynomial
from .product import ProductChart, build_product

KNOWN_CHECKS = ("closedness", "maxwell", "einstein", "norms", "split", "case")
FLUX_KEYS = FIBER_PIECES + BASE_PIECES


class ManifestError(ValueError):
    pass


@dataclass
class BackgroundSpec:
    name: str
    product: ProductChart
    background: Background
    checks: List[str]
    case: Optional[int]
    theorem: Optional[str]
    eval_points: List[Dict[str, Fraction]]
    flux_refs: Dict[str, str]
    product_ref: str


@dataclass
class Manifest:
    charts: Dict[str, Chart]
    metrics: Dict[str, ChartMetric]
    forms: Dict[str, DifferentialForm]
    products: Dict[str, ProductChart]
    backgrounds: List[BackgroundSpec]
    coupling: Fraction = Fraction(1)
    report_format: str = "text"
    metric_refs: Dict[str, dict] = field(default_factory=dict)
    product_refs: Dict[str, dict] = field(default_factory=dict)


def _poly(text, where: str) -> Polynomial:
    if not isinstance(text, str):
        raise ManifestError(f"{where}: polynomial literals must be strings, got {text!r}")
    try:
        return parse_polynomial(text)
    except PolynomialGrammarError as exc:
        raise ManifestError(f"{where}: bad polynomial {text!r}: {exc}") from exc


def _fraction(text, where: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ManifestError(f"{where}: bad rational {text!r}") from exc


def parse_manifest(path) -> Manifest:
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ManifestError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return parse_manifest_dict(raw, source=str(path))


def parse_manifest_dict(raw: dict, source: str = "<memory>") -> Manifest:
    if not isinstance(raw, dict):
        raise ManifestError(f"{source}: manifest must be a JSON object")
    schema = raw.get("schema", 1)
    if schema != 1:
        raise ManifestError(f"{source}: unsupported schema {schema!r}")

    settings = raw.get("settings", {})
    coupling = _fraction(settings.get("c", "1"), "settings.c")
    if coupling == 0:
        raise ManifestError("settings.c must be nonzero")
    report_format = settings.get("format", "text")
    if report_format not in ("text", "json"):
        raise ManifestError(f"settings.format must be 'text' or 'json', got {report_format!r}")

    charts: Dict[str, Chart] = {}
    for entry in raw.get("charts", []):
        name = entry.get("name")
        coords = entry.get("coordinates")
        if not name or not coords:
            raise ManifestError(f"{source}: chart entries need 'name' and 'coordinates'")
        if name in charts:
            raise ManifestError(f"duplicate chart {name!r}")
        charts[name] = Chart(name, tuple(coords))

    metrics: Dict[str, ChartMetric] = {}
    metric_refs: Dict[str, dict] = {}
    for entry in raw.get("metrics", []):
        name = entry.get("name")
        chart_ref = entry.get("chart")
        if chart_ref not in charts:
            raise ManifestError(f"metric {name!r}: unresolved chart reference {chart_ref!r}")
        chart = charts[chart_ref]
        lower = entry.get("lower_triangular")
        if not lower or len(lower) != chart.dim:
            raise ManifestError(
                f"metric {name!r}: lower_triangular must have {chart.dim} rows"
            )
        g = _symmetric_from_lower(lower, chart, f"metric {name!r}")
        g_inv = None
        if "inverse" in entry:
            g_inv = _symmetric_from_lower(entry["inverse"], chart, f"metric {name!r} inverse")
        signature = entry.get("signature")
        if signature is None:
            raise ManifestError(f"metric {name!r}: a signature declaration is mandatory")
        signature = (int(signature[0]), int(signature[1]))
        sqrt_abs_det = (
            _poly(entry["sqrt_abs_det"], f"metric {name!r}") if "sqrt_abs_det" in entry else None
        )
        if name in metrics:
            raise ManifestError(f"duplicate metric {name!r}")
        metrics[name] = make_metric(chart, g, g_inv, signature, sqrt_abs_det)
        metric_refs[name] = {"chart": chart_ref}

    forms: Dict[str, DifferentialForm] = {}
    for entry in raw.get("forms", []):
        name = entry.get("name")
        chart_ref = entry.get("chart")
        if chart_ref not in charts:
            raise ManifestError(f"form {name!r}: unresolved chart reference {chart_ref!r}")
        chart = charts[chart_ref]
        degree = entry.get("degree")
        if not isinstance(degree, int) or degree < 0:
            raise ManifestError(f"form {name!r}: bad degree {degree!r}")
        total = DifferentialForm.zero(chart, degree)
        for i, term in enumerate(entry.get("terms", [])):
            indices = term.get("indices", [])
            if len(indices) != degree:
                raise ManifestError(
                    f"form {name!r} term {i}: {len(indices)} indices for degree {degree}"
                )
            coeff = _poly(term.get("coeff", "1"), f"form {name!r} term {i}")
            total = total + DifferentialForm.monomial(chart, tuple(indices), coeff)
        if name in forms:
            raise ManifestError(f"duplicate form {name!r}")
        forms[name] = total

    products: Dict[str, ProductChart] = {}
    product_refs: Dict[str, dict] = {}
    for entry in raw.get("products", []):
        name = entry.get("name")
        base_ref = entry.get("base")
        fiber_ref = entry.get("fiber")
        if base_ref not in metrics:
            raise ManifestError(f"product {name!r}: unresolved base metric {base_ref!r}")
        if fiber_ref not in metrics:
            raise ManifestError(f"product {name!r}: unresolved fiber metric {fiber_ref!r}")
        warping = _poly(entry.get("warping", "1"), f"product {name!r} warping")
        if name in products:
            raise ManifestError(f"duplicate product {name!r}")
        products[name] = build_product(metrics[base_ref], metrics[fiber_ref], warping)
        product_refs[name] = {"base": base_ref, "fiber": fiber_ref}

    backgrounds: List[BackgroundSpec] = []
    raw_backgrounds = raw.get("backgrounds", [])
    if not raw_backgrounds:
        raise ManifestError(f"{source}: manifest declares no backgrounds")
    seen = set()
    for entry in raw_backgrounds:
        name = entry.get("name")
        if not name or name in seen:
            raise ManifestError(f"missing or duplicate background name {name!r}")
        seen.add(name)
        product_ref = entry.get("product")
        if product_ref not in products:
            raise ManifestError(f"background {name!r}: unresolved product {product_ref!r}")
        pc = products[product_ref]
        flux_entry = entry.get("flux", {})
        pieces = {}
        flux_refs = {}
        for key, ref in flux_entry.items():
            if key not in FLUX_KEYS:
                raise ManifestError(f"background {name!r}: unknown flux piece {key!r}")
            if ref not in forms:
                raise ManifestError(f"background {name!r}: unresolved form {ref!r}")
            pieces[key] = forms[ref]
            flux_refs[key] = ref
        checks = list(entry.get("checks", []))
        if not checks:
            raise ManifestError(f"background {name!r}: at least one check is required")
        case = entry.get("case")
        theorem = entry.get("theorem")
        for check in checks:
            if check not in KNOWN_CHECKS and check != "theorem":
                raise ManifestError(f"background {name!r}: unknown check {check!r}")
        if "case" in checks and case is None:
            raise ManifestError(f"background {name!r}: check 'case' needs a 'case' number")
        if "theorem" in checks and not theorem:
            raise ManifestError(f"background {name!r}: check 'theorem' needs a 'theorem' shape")
        eval_points = []
        for pt in entry.get("eval_points", []):
            eval_points.append({k: _fraction(v, f"background {name!r} eval point") for k, v in pt.items()})
        ansatz = FluxAnsatz(c=coupling, **pieces)
        background = assemble_flux(pc, ansatz)
        backgrounds.append(
            BackgroundSpec(
                name=name,
                product=pc,
                background=background,
                checks=checks,
                case=case,
                theorem=theorem,
                eval_points=eval_points,
                flux_refs=flux_refs,
                product_ref=product_ref,
            )
        )

    return Manifest(
        charts=charts,
        metrics=metrics,
        forms=forms,
        products=products,
        backgrounds=backgrounds,
        coupling=coupling,
        report_format=report_format,
        metric_refs=metric_refs,
        product_refs=product_refs,
    )


def _symmetric_from_lower(lower, chart: Chart, where: str):
    n = chart.dim
    if len(lower) != n:
        raise ManifestError(f"{where}: expected {n} rows")
    zero = Polynomial.zero()
    g = [[zero] * n for _ in range(n)]
    for i, row in enumerate(lower):
        if len(row) != i + 1:
            raise ManifestError(f"{where}: row {i} must have {i + 1} entries")
        for j, text in enumerate(row):
            p = _poly(text, f"{where} entry ({i},{j})")
            g[i][j] = p
            g[j][i] = p
    return g


def serialize_manifest(m: Manifest) -> dict:
    """Regenerate a manifest document from the resolved objects."""

    def lower_of(metric: ChartMetric):
        return [
            [str(metric.g[i][j]) for j in range(i + 1)] for i in range(metric.dim)
        ]

    def inverse_of(metric: ChartMetric):
        return [
            [str(metric.g_inv[i][j]) for j in range(i + 1)] for i in range(metric.dim)
        ]

    doc = {
        "schema": 1,
        "settings": {"c": str(m.coupling), "format": m.report_format},
        "charts": [
            {"name": c.name, "coordinates": list(c.coordinates)} for c in m.charts.values()
        ],
        "metrics": [
            {
                "name": name,
                "chart": m.metric_refs[name]["chart"],
                "lower_triangular": lower_of(metric),
                "inverse": inverse_of(metric),
                "signature": list(metric.signature),
                "sqrt_abs_det": str(metric.sqrt_abs_det),
            }
            for name, metric in m.metrics.items()
        ],
        "forms": [
            {
                "name": name,
                "chart": form.chart.name,
                "degree": form.degree,
                "terms": [
                    {
                        "indices": [form.chart.coordinates[i] for i in idx],
                        "coeff": str(form.components[idx]),
                    }
                    for idx in sorted(form.components)
                ],
            }
            for name, form in m.forms.items()
        ],
        "products": [
            {
                "name": name,
                "base": m.product_refs[name]["base"],
                "fiber": m.product_refs[name]["fiber"],
                "warping": str(pc.warping),
            }
            for name, pc in m.products.items()
        ],
        "backgrounds": [
            {
                "name": spec.name,
                "product": spec.product_ref,
                "flux": dict(spec.flux_refs),
                "checks": list(spec.checks),
                **({"case": spec.case} if spec.case is not None else {}),
                **({"theorem": spec.theorem} if spec.theorem else {}),
                **(
                    {
                        "eval_points": [
                            {k: str(v) for k, v in pt.items()} for pt in spec.eval_points
                        ]
                    }
                    if spec.eval_points
                    else {}
                ),
            }
            for spec in m.backgrounds
        ],
    }
    return doc
