"""Pseudo-Riemannian metrics on charts: musicals, form inner products,
volume forms, Hodge star, null tests.

Sign conventions are fixed once and used everywhere:

  * Riemannian factors are negative definite (signature (0, s)); a unit
    vector X has g(X, X) = -1.  Lorentzian factors have signature
    (1, n-1), "mostly minus".
  * The inner product on p-forms is the Gram-minor pairing
    <a, b> = sum_{I,J} a_I b_J det(g_inv[I, J]) over increasing tuples,
    i.e. the 1/p! contraction of components with p inverse metrics.
  * The star is defined by  a ^ star(b) = <a, b> vol  against the chart
    orientation, with vol = sqrt|det g| dx^1^...^dx^n.

On a negative-definite factor this star differs from the
Euclidean-signature star by (-1)^p on p-forms, which shows up as
recorded sign deviations next to values quoted from positive-definite
computations (see CONVENTION_NOTES).

Metric inverses must be polynomial; the coefficient ring stays a ring
and every residual stays exact.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Dict, Sequence, Tuple

from .exterior import Chart, ChartError, DegreeError, DifferentialForm, VectorField, _sort_with_sign
from .polyring import NotAPerfectSquare, Polynomial, poly_sqrt

CONVENTION_NOTES = (
    "Riemannian factors are negative definite; the Hodge dual on such a factor "
    "differs from the Euclidean-signature dual by (-1)^p on p-forms.",
    "With rho = -(dx1^2+...+dx4^2): star_rho(x2 dx2^dx3^dx4) = +x2 dx1 "
    "(Euclidean-signature computation gives -x2 dx1).",
    "With g = -(dy1^2+...+dy5^2) and nu = y1 dy1: d star nu = -vol "
    "(Euclidean-signature computation gives +vol).",
)


class MetricError(ValueError):
    pass


class NonPolynomialInverse(MetricError):
    pass


class InverseMismatch(MetricError):
    pass


class VolumeNotPolynomial(MetricError):
    pass


Matrix = Tuple[Tuple[Polynomial, ...], ...]


def _as_matrix(rows: Sequence[Sequence[Polynomial]]) -> Matrix:
    return tuple(tuple(row) for row in rows)


def _mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    return tuple(
        tuple(sum((a[i][k] * b[k][j] for k in range(n)), Polynomial.zero()) for j in range(n))
        for i in range(n)
    )


def _is_identity(m: Matrix) -> bool:
    n = len(m)
    one = Polynomial.constant(1)
    for i in range(n):
        for j in range(n):
            want = one if i == j else Polynomial.zero()
            if m[i][j] != want:
                return False
    return True


def poly_det(m: Matrix) -> Polynomial:
    """Exact determinant by expansion over column subsets (memoized)."""
    n = len(m)
    cache: Dict[Tuple[int, int], Polynomial] = {}

    def rec(row: int, cols: int) -> Polynomial:
        if row == n:
            return Polynomial.constant(1)
        key = (row, cols)
        hit = cache.get(key)
        if hit is not None:
            return hit
        total = Polynomial.zero()
        sign = 1
        for j in range(n):
            bit = 1 << j
            if not (cols & bit):
                continue
            entry = m[row][j]
            if not entry.is_zero():
                sub = rec(row + 1, cols & ~bit)
                term = entry * sub
                total = total + (term if sign > 0 else -term)
            sign = -sign
        cache[key] = total
        return total

    return rec(0, (1 << n) - 1)


class ChartMetric:
    """Validated symmetric polynomial metric with polynomial inverse."""

    def __init__(
        self,
        chart: Chart,
        g: Matrix,
        g_inv: Matrix,
        signature: Tuple[int, int],
        det_sign: int,
        sqrt_abs_det: Polynomial,
    ):
        self.chart = chart
        self.g = g
        self.g_inv = g_inv
        self.signature = signature
        self.det_sign = det_sign
        self.sqrt_abs_det = sqrt_abs_det
        self._curvature = None  # lazily filled by the curvature module

    @property
    def dim(self) -> int:
        return self.chart.dim

    def entry(self, i: int, j: int) -> Polynomial:
        return self.g[i][j]

    def inv_entry(self, i: int, j: int) -> Polynomial:
        return self.g_inv[i][j]

    @property
    def inv_neighbors(self) -> Tuple[Tuple[int, ...], ...]:
        """For each index, the indices it pairs with under g_inv (sparsity)."""
        cached = getattr(self, "_inv_neighbors", None)
        if cached is None:
            n = self.dim
            cached = tuple(
                tuple(i for i in range(n) if not self.g_inv[i][j].is_zero())
                for j in range(n)
            )
            self._inv_neighbors = cached
        return cached


def make_metric(
    chart: Chart,
    g_rows: Sequence[Sequence[Polynomial]],
    g_inv_rows: Sequence[Sequence[Polynomial]] | None = None,
    signature: Tuple[int, int] | None = None,
    sqrt_abs_det: Polynomial | None = None,
) -> ChartMetric:
    """Build and validate a chart metric.

    When no inverse is supplied it is computed by adjugate/determinant,
    which is accepted only for a nonzero constant determinant.
    """
    n = chart.dim
    g = _as_matrix(g_rows)
    if len(g) != n or any(len(row) != n for row in g):
        raise MetricError(f"metric must be {n}x{n} on chart {chart.name!r}")
    for i in range(n):
        for j in range(i):
            if g[i][j] != g[j][i]:
                raise MetricError(f"metric not symmetric at ({i},{j})")

    det = poly_det(g)
    if det.is_zero():
        raise MetricError("metric is degenerate (zero determinant)")

    if g_inv_rows is None:
        if not det.is_constant():
            raise NonPolynomialInverse(
                "no inverse supplied and det is non-constant; supply a polynomial inverse"
            )
        d = det.constant_value()
        inv = []
        for i in range(n):
            row = []
            for j in range(n):
                # cofactor expansion: inv[i][j] = C_ji / det
                minor = [
                    [g[r][c] for c in range(n) if c != i]
                    for r in range(n)
                    if r != j
                ]
                cof = poly_det(_as_matrix(minor)) * ((-1) ** (i + j))
                row.append(cof * (Fraction(1) / d))
            inv.append(row)
        g_inv = _as_matrix(inv)
    else:
        g_inv = _as_matrix(g_inv_rows)
        if len(g_inv) != n or any(len(row) != n for row in g_inv):
            raise MetricError("inverse has wrong shape")

    if not _is_identity(_mat_mul(g, g_inv)):
        raise InverseMismatch("g * g_inv is not the identity")

    if sqrt_abs_det is not None:
        sq = sqrt_abs_det * sqrt_abs_det
        if sq == det:
            det_sign = 1
        elif sq == -det:
            det_sign = -1
        else:
            raise VolumeNotPolynomial("supplied sqrt_abs_det does not square to |det g|")
        if sqrt_abs_det.leading()[1] < 0:
            raise VolumeNotPolynomial("sqrt_abs_det must have a positive leading coefficient")
        root = sqrt_abs_det
    else:
        try:
            root = poly_sqrt(det)
            det_sign = 1
        except NotAPerfectSquare:
            try:
                root = poly_sqrt(-det)
                det_sign = -1
            except NotAPerfectSquare:
                raise VolumeNotPolynomial(
                    f"|det g| = |{det}| has no polynomial square root"
                ) from None

    if signature is None:
        signature = _infer_signature(g, chart, det_sign)
    plus, minus = signature
    if plus + minus != n:
        raise MetricError(f"signature {signature} does not match dim {n}")
    if det_sign != (-1) ** minus:
        raise MetricError(
            f"declared signature {signature} is inconsistent with sign(det) = {det_sign}"
        )
    return ChartMetric(chart, g, g_inv, (plus, minus), det_sign, root)


def _infer_signature(g: Matrix, chart: Chart, det_sign: int) -> Tuple[int, int]:
    """Infer signature by exact symmetric Gaussian reduction at the origin."""
    pt = {c: Fraction(0) for c in chart.coordinates}
    n = len(g)
    a = [[g[i][j].evaluate(pt) for j in range(n)] for i in range(n)]
    plus = minus = 0
    idx = list(range(n))
    for _ in range(n):
        pivot = next((i for i in idx if a[i][i] != 0), None)
        if pivot is None:
            # null basis pair: a symmetric matrix with zero diagonal but some
            # off-diagonal entry contributes one plus and one minus
            found = None
            for i in idx:
                for j in idx:
                    if i != j and a[i][j] != 0:
                        found = (i, j)
                        break
                if found:
                    break
            if found is None:
                break
            i, j = found
            for k in range(n):
                a[i][k] += a[j][k]
            for k in range(n):
                a[k][i] += a[k][j]
            pivot = i
        d = a[pivot][pivot]
        if d > 0:
            plus += 1
        else:
            minus += 1
        for i in idx:
            if i == pivot or a[i][pivot] == 0:
                continue
            factor = a[i][pivot] / d
            for k in range(n):
                a[i][k] -= factor * a[pivot][k]
            for k in range(n):
                a[k][i] -= factor * a[k][pivot]
        idx.remove(pivot)
    if (-1) ** minus != det_sign:
        raise MetricError("could not infer a signature consistent with sign(det)")
    return plus, minus


# ---------------------------------------------------------------------------
# musicals
# ---------------------------------------------------------------------------

def sharp(m: ChartMetric, a: DifferentialForm) -> VectorField:
    """Raise a 1-form to a vector field with g_inv."""
    if a.chart != m.chart:
        raise ChartError("chart mismatch")
    if a.degree != 1:
        raise DegreeError("sharp expects a 1-form")
    out: Dict[int, Polynomial] = {}
    for (i,), poly in a.components.items():
        for j in range(m.dim):
            entry = m.g_inv[i][j]
            if entry.is_zero():
                continue
            out[j] = out.get(j, Polynomial.zero()) + poly * entry
    return VectorField(m.chart, out)


def flat(m: ChartMetric, v: VectorField) -> DifferentialForm:
    """Lower a vector field to a 1-form with g."""
    if v.chart != m.chart:
        raise ChartError("chart mismatch")
    out: Dict[Tuple[int, ...], Polynomial] = {}
    for i, poly in v.components.items():
        for j in range(m.dim):
            entry = m.g[i][j]
            if entry.is_zero():
                continue
            key = (j,)
            out[key] = out.get(key, Polynomial.zero()) + poly * entry
    return DifferentialForm(m.chart, 1, out)


def vector_inner(m: ChartMetric, a: VectorField, b: VectorField) -> Polynomial:
    total = Polynomial.zero()
    for i, ai in a.components.items():
        for j, bj in b.components.items():
            entry = m.g[i][j]
            if not entry.is_zero():
                total = total + ai * bj * entry
    return total


# ---------------------------------------------------------------------------
# inner products of forms, Hodge star, volume
# ---------------------------------------------------------------------------

def _gram_minor(m: ChartMetric, rows: Tuple[int, ...], cols: Tuple[int, ...]) -> Polynomial:
    sub = tuple(tuple(m.g_inv[r][c] for c in cols) for r in rows)
    return poly_det(sub)


def inner_product_forms(m: ChartMetric, a: DifferentialForm, b: DifferentialForm) -> Polynomial:
    """<a, b> as the sum of Gram minors of g_inv over component pairs."""
    if a.chart != m.chart or b.chart != m.chart:
        raise ChartError("chart mismatch")
    if a.degree != b.degree:
        raise DegreeError(f"degree mismatch: {a.degree} vs {b.degree}")
    if a.degree == 0:
        pa = a.components.get((), Polynomial.zero())
        pb = b.components.get((), Polynomial.zero())
        return pa * pb
    neighbors = m.inv_neighbors
    total = Polynomial.zero()
    for ia, pa in a.components.items():
        row_sets = [set(neighbors[i]) for i in ia]
        for ib, pb in b.components.items():
            # the minor vanishes unless every row index can pair some column
            bset = set(ib)
            if any(not (rs & bset) for rs in row_sets):
                continue
            minor = _gram_minor(m, ia, ib)
            if not minor.is_zero():
                total = total + pa * pb * minor
    return total


def norm_sq(m: ChartMetric, a: DifferentialForm) -> Polynomial:
    return inner_product_forms(m, a, a)


def is_null(m: ChartMetric, a: DifferentialForm) -> bool:
    return norm_sq(m, a).is_zero()


def volume_form(m: ChartMetric) -> DifferentialForm:
    return DifferentialForm(
        m.chart, m.dim, {tuple(range(m.dim)): m.sqrt_abs_det}
    )


def hodge_star(m: ChartMetric, a: DifferentialForm) -> DifferentialForm:
    """The unique form with b ^ star(a) = <b, a> vol for all b."""
    if a.chart != m.chart:
        raise ChartError("chart mismatch")
    n = m.dim
    p = a.degree
    if p > n:
        # only identically-zero forms carry degree > dim
        return DifferentialForm.zero(m.chart, 0)
    out: Dict[Tuple[int, ...], Polynomial] = {}
    s = m.sqrt_abs_det
    full = tuple(range(n))
    neighbors = m.inv_neighbors
    # only row sets drawn from the columns' g_inv-neighbors give nonzero minors
    contributions: Dict[Tuple[int, ...], Polynomial] = {}
    for cols, pa in a.components.items():
        candidates = sorted(set().union(*(neighbors[c] for c in cols))) if cols else []
        for rows in combinations(candidates, p):
            col_ok = all(any(r in neighbors[c] for r in rows) for c in cols)
            if not col_ok:
                continue
            minor = _gram_minor(m, rows, cols)
            if minor.is_zero():
                continue
            term = pa * minor
            prev = contributions.get(rows)
            contributions[rows] = term if prev is None else prev + term
    for rows, coeff in contributions.items():
        if coeff.is_zero():
            continue
        complement = tuple(i for i in full if i not in rows)
        _, sign = _sort_with_sign(rows + complement)
        term = coeff * s
        if sign < 0:
            term = -term
        prev = out.get(complement)
        out[complement] = term if prev is None else prev + term
    return DifferentialForm(m.chart, n - p, out)
