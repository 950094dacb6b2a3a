"""Metric layer: musicals, form inner products, Hodge star, volume, nullness."""

import random
from fractions import Fraction

import pytest

from sugra11.exterior import (
    Chart,
    DifferentialForm,
    exterior_derivative as d,
    wedge,
)
from sugra11.metric import (
    InverseMismatch,
    MetricError,
    NonPolynomialInverse,
    flat,
    hodge_star,
    inner_product_forms,
    is_null,
    make_metric,
    norm_sq,
    sharp,
    volume_form,
)
from sugra11.polyring import Polynomial

from test_exterior import random_form  # noqa: E402

P0 = Polynomial.zero()
P1 = Polynomial.constant(1)


def const_matrix(values):
    return [[Polynomial.constant(v) for v in row] for row in values]


def diag(*values):
    n = len(values)
    return const_matrix([[values[i] if i == j else 0 for j in range(n)] for i in range(n)])


N4 = Chart("N4", ("x1", "x2", "x3", "x4"))
RHO = make_metric(N4, diag(-1, -1, -1, -1), signature=(0, 4))

M5 = Chart("M5", ("y1", "y2", "y3", "y4", "y5"))
G5 = make_metric(M5, diag(-1, -1, -1, -1, -1), signature=(0, 5))


def walker_chart():
    return Chart("W6", ("v", "x1", "x2", "x3", "x4", "u"))


def walker_metric(H):
    """2 dv du - sum dx_i^2 + H du^2 on (v, x1..x4, u)."""
    W = walker_chart()
    n = 6
    g = [[P0] * n for _ in range(n)]
    g[0][5] = g[5][0] = P1
    for i in range(1, 5):
        g[i][i] = -P1
    g[5][5] = H
    ginv = [[P0] * n for _ in range(n)]
    ginv[0][0] = -H
    ginv[0][5] = ginv[5][0] = P1
    for i in range(1, 5):
        ginv[i][i] = -P1
    return make_metric(W, g, ginv, signature=(1, 5))


H_EXAMPLE = sum(
    (Polynomial.variable(f"x{i}") ** 2 * Fraction(1, 8) for i in range(1, 5)),
    Polynomial.zero(),
)


def dx(chart, name):
    return DifferentialForm.coordinate_differential(chart, name)


# -- construction ---------------------------------------------------------------

def test_walker_metric_validates_with_unit_abs_det():
    m = walker_metric(H_EXAMPLE)
    assert m.det_sign == -1
    assert m.sqrt_abs_det == P1


def test_walker_inverse_computed_by_adjugate_when_omitted():
    # |det| = 1 is constant, so the adjugate route applies and reproduces
    # the closed-form inverse with its polynomial H entry
    given = walker_metric(H_EXAMPLE)
    computed = make_metric(given.chart, given.g, signature=(1, 5))
    assert computed.g_inv == given.g_inv
    assert computed.g_inv[0][0] == -H_EXAMPLE


def test_euclidean_block_inverse_computed_automatically():
    m = make_metric(M5, diag(-1, -1, -1, -1, -1))
    assert m.signature == (0, 5)
    for i in range(5):
        assert m.g_inv[i][i] == -P1


def test_non_symmetric_metric_rejected():
    bad = const_matrix([[1, 2], [0, 1]])
    with pytest.raises(MetricError):
        make_metric(Chart("C2", ("a", "b")), bad)


def test_non_constant_det_without_inverse_rejected():
    C = Chart("C1", ("a",))
    g = [[Polynomial.variable("a") ** 2 + P1]]
    with pytest.raises(NonPolynomialInverse):
        make_metric(C, g)


def test_wrong_inverse_rejected():
    with pytest.raises(InverseMismatch):
        make_metric(N4, diag(-1, -1, -1, -1), diag(1, 1, 1, 1))


def test_supplied_sqrt_abs_det_is_validated():
    from sugra11.metric import VolumeNotPolynomial

    C = Chart("CS", ("a", "b"))
    with pytest.raises(VolumeNotPolynomial):
        make_metric(C, diag(-1, -1), sqrt_abs_det=Polynomial.constant(2))
    m = make_metric(C, diag(-1, -1), sqrt_abs_det=Polynomial.constant(1))
    assert m.det_sign == 1


# -- musicals ----------------------------------------------------------------------

def test_sharp_of_du_is_dv_direction():
    m = walker_metric(H_EXAMPLE)
    v = sharp(m, dx(m.chart, "u"))
    assert v.components == {0: P1}  # d/dv


def test_sharp_flat_inverse_pair_randomized():
    rng = random.Random(2)
    m = walker_metric(H_EXAMPLE)
    for _ in range(10):
        nu = random_form(rng, m.chart, 1)
        assert flat(m, sharp(m, nu)) == nu


def test_sharp_of_dt_in_negative_definite_metric():
    C = Chart("C5", ("z1", "z2", "z3", "z4", "t"))
    g = make_metric(C, diag(-1, -1, -1, -1, -1), signature=(0, 5))
    eta = dx(C, "t")
    v = sharp(g, eta)
    assert v.components == {4: -P1}
    assert flat(g, v) == eta


# -- inner products ------------------------------------------------------------------

def test_kaehler_form_norm_is_two():
    omega = wedge(dx(N4, "x1"), dx(N4, "x2")) + wedge(dx(N4, "x3"), dx(N4, "x4"))
    assert norm_sq(RHO, omega) == Polynomial.constant(2)


def test_three_form_norm_is_minus_one():
    theta = DifferentialForm.monomial(N4, ("x2", "x3", "x4"), P1)
    assert norm_sq(RHO, theta) == Polynomial.constant(-1)


def test_inner_product_is_symmetric_bilinear():
    from hypothesis import given, settings
    from hypothesis import strategies as st

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 10 ** 6), st.integers(1, 4), st.integers(-3, 3))
    def check(seed, degree, scale):
        rng = random.Random(seed)
        m = walker_metric(H_EXAMPLE)
        a = random_form(rng, m.chart, degree)
        b = random_form(rng, m.chart, degree)
        c = random_form(rng, m.chart, degree)
        assert inner_product_forms(m, a, b) == inner_product_forms(m, b, a)
        lhs = inner_product_forms(m, a * Fraction(scale) + c, b)
        rhs = inner_product_forms(m, a, b) * Fraction(scale) + inner_product_forms(m, c, b)
        assert lhs == rhs

    check()


def test_du_aligned_forms_are_null():
    m = walker_metric(H_EXAMPLE)
    a = wedge(dx(m.chart, "u"), DifferentialForm.monomial(m.chart, ("x2", "x3", "x4"), P1))
    assert is_null(m, a)
    assert norm_sq(m, dx(m.chart, "u")).is_zero()


def test_dt_is_not_null():
    C = Chart("C5b", ("z1", "z2", "z3", "z4", "t"))
    g = make_metric(C, diag(-1, -1, -1, -1, -1), signature=(0, 5))
    assert norm_sq(g, dx(C, "t")) == Polynomial.constant(-1)
    assert not is_null(g, dx(C, "t"))
    assert is_null(g, DifferentialForm.zero(C, 2))


# -- hodge star ------------------------------------------------------------------------

def test_star_of_weighted_three_form_on_negative_definite_rho():
    omega_plus = DifferentialForm.monomial(N4, ("x2", "x3", "x4"), Polynomial.variable("x2"))
    starred = hodge_star(RHO, omega_plus)
    # +x2 dx1 under the negative-definite convention; the Euclidean-sign
    # computation yields -x2 dx1 (recorded convention deviation)
    assert starred == DifferentialForm.monomial(N4, ("x1",), Polynomial.variable("x2"))


def test_star_top_and_bottom():
    vol = volume_form(RHO)
    assert hodge_star(RHO, DifferentialForm.function(N4, P1)) == vol
    starred_vol = hodge_star(RHO, vol)
    assert starred_vol == DifferentialForm.function(N4, Polynomial.constant(RHO.det_sign))


def test_star_of_du_wedge_two_form_equals_du_wedge_rho_star():
    m = walker_metric(H_EXAMPLE)
    W = m.chart
    rng = random.Random(4)
    for _ in range(8):
        omega = random_form(rng, N4, 2, coeff_names=("x1", "x2", "x3", "x4"))
        from sugra11.exterior import lift_to_product

        lifted = lift_to_product(omega, W)
        lhs = hodge_star(m, wedge(dx(W, "u"), lifted))
        rhs = wedge(dx(W, "u"), lift_to_product(hodge_star(RHO, omega), W))
        assert lhs == rhs


def test_star_star_law_randomized():
    rng = random.Random(6)
    for metric, chart in ((RHO, N4), (G5, M5), (walker_metric(H_EXAMPLE), walker_chart())):
        metric = metric if chart != walker_chart() else walker_metric(H_EXAMPLE)
        n = chart.dim
        for _ in range(8):
            p = rng.randint(0, n)
            a = random_form(rng, metric.chart, p)
            expect = a * Fraction(metric.det_sign * (-1) ** (p * (n - p)))
            assert hodge_star(metric, hodge_star(metric, a)) == expect


def test_defining_identity_randomized():
    rng = random.Random(8)
    for metric in (RHO, G5, walker_metric(H_EXAMPLE)):
        chart = metric.chart
        vol = volume_form(metric)
        for _ in range(8):
            p = rng.randint(0, chart.dim)
            a = random_form(rng, chart, p)
            b = random_form(rng, chart, p)
            lhs = wedge(a, hodge_star(metric, b))
            rhs = vol * inner_product_forms(metric, a, b)
            assert lhs == rhs


def test_volume_form_of_euclidean_block():
    assert volume_form(G5) == DifferentialForm.monomial(M5, M5.coordinates, P1)


def test_star_nu_and_its_derivative_under_convention():
    nu = DifferentialForm.monomial(M5, ("y1",), Polynomial.variable("y1"))
    star_nu = hodge_star(G5, nu)
    expected = DifferentialForm.monomial(M5, ("y2", "y3", "y4", "y5"), -Polynomial.variable("y1"))
    assert star_nu == expected
    assert d(star_nu) == volume_form(G5) * Fraction(-1)
