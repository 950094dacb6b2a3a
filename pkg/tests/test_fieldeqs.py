"""Flux assembly, block-law cross-checks, and the three equation residuals."""

import random
from fractions import Fraction

import pytest

from sugra11.curvature import is_totally_ricci_isotropic
from sugra11.exterior import Chart, DifferentialForm, wedge
from sugra11.fieldeqs import (
    AnsatzError,
    FluxAnsatz,
    assemble_flux,
    check_closedness,
    check_einstein,
    check_maxwell,
    einstein_residual_matrix,
    flux_norm_sq,
    split_einstein,
)
from sugra11.metric import make_metric, norm_sq
from sugra11.polyring import Polynomial
from sugra11.product import build_product
from sugra11.solutions import (
    build_alpha_background,
    build_alpha_beta_nu_background,
    build_beta_nu_background,
    build_varpi_epsilon_background,
    flat_negative_metric,
    standard_base,
    walker_metric_from_rho,
)

from test_exterior import random_form
from test_metric import diag

P0 = Polynomial.zero()
P1 = Polynomial.constant(1)


def rho_flat():
    return flat_negative_metric(Chart("n4", ("x1", "x2", "x3", "x4")))


def quadratic_H(coeff):
    return sum(
        (Polynomial.variable(f"x{i}") ** 2 * Fraction(coeff) for i in range(1, 5)),
        Polynomial.zero(),
    )


def dform(chart, *names):
    return DifferentialForm.monomial(chart, names, P1)


def full_ansatz_background(f=1, monomial=True, seed=0):
    """All five pieces present, on flat factors, for block-law exercises."""
    rng = random.Random(seed)
    base = standard_base()
    fiber = make_metric(
        Chart("l6", ("w0", "w1", "w2", "w3", "w4", "w5")),
        diag(1, -1, -1, -1, -1, -1),
        signature=(1, 5),
    )
    bc, fc = base.chart, fiber.chart
    if monomial:
        w0 = Polynomial.variable("w1")
        y = Polynomial.variable("y2")
        alpha_t = DifferentialForm.monomial(fc, ("w0", "w1", "w2", "w3"), w0)
        beta_t = DifferentialForm.monomial(fc, ("w1", "w2", "w4"), P1 + w0)
        gamma_t = DifferentialForm.monomial(fc, ("w0", "w5"), w0 * w0)
        varpi_t = DifferentialForm.monomial(fc, ("w3",), P1)
        nu = DifferentialForm.monomial(bc, ("y1",), y)
        delta = DifferentialForm.monomial(bc, ("y2", "y3"), P1)
        epsilon = DifferentialForm.monomial(bc, ("y1", "y4", "y5"), y + 1)
        theta = DifferentialForm.monomial(bc, ("y2", "y3", "y4", "y5"), y)
    else:
        alpha_t = random_form(rng, fc, 4, terms=2)
        beta_t = random_form(rng, fc, 3, terms=2)
        gamma_t = random_form(rng, fc, 2, terms=2)
        varpi_t = random_form(rng, fc, 1, terms=2)
        nu = random_form(rng, bc, 1, terms=2)
        delta = random_form(rng, bc, 2, terms=2)
        epsilon = random_form(rng, bc, 3, terms=2)
        theta = random_form(rng, bc, 4, terms=2)
    pc = build_product(base, fiber, f)
    ansatz = FluxAnsatz(
        alpha_t=alpha_t,
        beta_t=beta_t,
        gamma_t=gamma_t,
        varpi_t=varpi_t,
        nu=nu,
        delta=delta,
        epsilon=epsilon,
        theta=theta,
    )
    return assemble_flux(pc, ansatz)


# -- assembly -------------------------------------------------------------------

def test_assemble_flux_shapes_and_errors():
    base = standard_base()
    fiber = walker_metric_from_rho(rho_flat(), quadratic_H(Fraction(1, 8)))
    pc = build_product(base, fiber, 1)
    with pytest.raises(AnsatzError):
        assemble_flux(pc, FluxAnsatz())
    beta3 = dform(fiber.chart, "u", "x2", "x3")
    with pytest.raises(AnsatzError):
        # beta without nu is not a valid pairing
        assemble_flux(pc, FluxAnsatz(beta_t=beta3))


def test_assembled_flux_of_alpha_family():
    build = build_alpha_background(rho_flat(), dform(rho_flat().chart, "x2", "x3", "x4"), quadratic_H(Fraction(1, 8)))
    flux = build.background.flux
    assert flux.degree == 4
    chart = build.background.product.chart
    assert flux.component("u", "x2", "x3", "x4") == P1
    assert chart.dim == 11


# -- norm block law ----------------------------------------------------------------

def test_flux_norm_block_law_full_ansatz():
    for f in (1, 2):
        bg = full_ansatz_background(f=f)
        direct, block = flux_norm_sq(bg)
        assert direct == block


def test_flux_norm_of_null_du_flux_vanishes():
    build = build_alpha_background(rho_flat(), dform(rho_flat().chart, "x2", "x3", "x4"), quadratic_H(Fraction(1, 8)))
    direct, block = flux_norm_sq(build.background)
    assert direct.is_zero() and block.is_zero()


# -- closedness ---------------------------------------------------------------------

def test_closedness_system_matches_direct_on_random_instances():
    violations = 0
    satisfactions = 0
    for seed in range(22):
        bg = full_ansatz_background(monomial=False, seed=seed)
        result = check_closedness(bg)
        system_zero = all(
            v.is_zero() for k, v in result.residuals.items() if k != "dF"
        )
        direct_zero = result.residuals["dF"].is_zero()
        assert system_zero == direct_zero
        if direct_zero:
            satisfactions += 1
        else:
            violations += 1
    assert violations >= 1  # random coefficient forms are generically non-closed


def test_closedness_of_solution_families():
    for build in (
        build_alpha_background(rho_flat(), dform(rho_flat().chart, "x2", "x3", "x4"), quadratic_H(Fraction(1, 8))),
        build_beta_nu_background(
            rho_flat(),
            dform(rho_flat().chart, "x1", "x2") + dform(rho_flat().chart, "x3", "x4"),
            quadratic_H(Fraction(1, 4)),
        ),
        build_varpi_epsilon_background(rho_flat(), quadratic_H(Fraction(1, 4))),
    ):
        assert check_closedness(build.background).passed


def test_closedness_flags_non_closed_theta():
    base = standard_base()
    fiber = walker_metric_from_rho(rho_flat(), quadratic_H(Fraction(1, 8)))
    pc = build_product(base, fiber, 1)
    theta = DifferentialForm.monomial(
        base.chart, ("y2", "y3", "y4", "y5"), Polynomial.variable("y1")
    )
    bg = assemble_flux(pc, FluxAnsatz(theta=theta))
    result = check_closedness(bg)
    assert not result.passed
    assert not result.residuals["d_theta"].is_zero()
    assert not result.residuals["dF"].is_zero()


# -- gauge equation --------------------------------------------------------------------

def test_maxwell_block_laws_on_full_ansatz():
    # the checker raises EngineInconsistency if any block law fails
    for f in (1, 2):
        bg = full_ansatz_background(f=f)
        check_maxwell(bg)


def test_maxwell_block_laws_on_random_instances():
    for seed in (3, 4, 5):
        bg = full_ansatz_background(monomial=False, seed=seed)
        check_maxwell(bg)


def test_maxwell_passes_on_solution_families():
    for build in (
        build_alpha_background(rho_flat(), dform(rho_flat().chart, "x2", "x3", "x4"), quadratic_H(Fraction(1, 8))),
        build_beta_nu_background(
            rho_flat(),
            dform(rho_flat().chart, "x1", "x2") + dform(rho_flat().chart, "x3", "x4"),
            quadratic_H(Fraction(1, 4)),
        ),
        build_varpi_epsilon_background(rho_flat(), quadratic_H(Fraction(1, 4))),
    ):
        assert check_maxwell(build.background).passed


def test_maxwell_fails_for_non_coclosed_piece():
    rho = rho_flat()
    theta_n = DifferentialForm.monomial(rho.chart, ("x2", "x3", "x4"), Polynomial.variable("x2"))
    build = build_alpha_background(rho, theta_n, quadratic_H(Fraction(1, 8)))
    assert not check_maxwell(build.background).passed


# -- einstein -----------------------------------------------------------------------------

def test_einstein_zero_for_flat_zero_flux_is_vacuous():
    base = standard_base()
    fiber = make_metric(
        Chart("l6z", ("w0", "w1", "w2", "w3", "w4", "w5")),
        diag(1, -1, -1, -1, -1, -1),
        signature=(1, 5),
    )
    pc = build_product(base, fiber, 1)
    theta = DifferentialForm.zero(base.chart, 4)
    bg = assemble_flux(pc, FluxAnsatz(theta=theta))
    assert check_closedness(bg).passed
    assert check_maxwell(bg).passed
    assert check_einstein(bg).passed


def test_exactness_survives_enormous_rational_coefficients():
    # scaling theta by k scales |theta|^2 by k^2, so H must scale by k^2;
    # with k ~ 10^21 any fixed-width arithmetic would have failed long ago
    k = Fraction(10 ** 21 + 7, 3)
    rho = rho_flat()
    theta = DifferentialForm.monomial(rho.chart, ("x2", "x3", "x4"), Polynomial.constant(k))
    build = build_alpha_background(rho, theta, quadratic_H(Fraction(1, 8) * k * k))
    assert build.conditions.passed
    assert check_einstein(build.background).passed
    wrong = build_alpha_background(rho, theta, quadratic_H(Fraction(1, 8) * (k * k + 1)))
    assert not check_einstein(wrong.background).passed


def test_du_aligned_fluxes_are_null_with_vanishing_self_wedge():
    rho = rho_flat()
    builds = (
        build_alpha_background(rho, dform(rho.chart, "x2", "x3", "x4"), quadratic_H(Fraction(1, 8))),
        build_beta_nu_background(
            rho,
            dform(rho.chart, "x1", "x2") + dform(rho.chart, "x3", "x4"),
            quadratic_H(Fraction(1, 4)),
        ),
    )
    for build in builds:
        flux = build.background.flux
        assert wedge(flux, flux).is_zero()
        assert norm_sq(build.background.metric, flux).is_zero()


def test_einstein_alpha_family_end_to_end():
    build = build_alpha_background(
        rho_flat(), dform(rho_flat().chart, "x2", "x3", "x4"), quadratic_H(Fraction(1, 8))
    )
    assert build.conditions.passed
    assert check_einstein(build.background).passed


def test_einstein_beta_nu_family_end_to_end():
    rho = rho_flat()
    omega = dform(rho.chart, "x1", "x2") + dform(rho.chart, "x3", "x4")
    assert norm_sq(rho, omega) == Polynomial.constant(2)
    build = build_beta_nu_background(rho, omega, quadratic_H(Fraction(1, 4)))
    assert build.conditions.passed
    assert check_einstein(build.background).passed


def test_einstein_varpi_epsilon_family_end_to_end():
    build = build_varpi_epsilon_background(rho_flat(), quadratic_H(Fraction(1, 4)))
    assert build.conditions.passed
    assert check_einstein(build.background).passed
    ok, witness = is_totally_ricci_isotropic(build.background.metric)
    assert ok and witness is None


def test_einstein_alpha_family_on_sheared_coordinates():
    # the same family written in sheared flat coordinates: the transverse
    # block has off-diagonal entries and nonzero Christoffel symbols, and
    # theta / H are the pullbacks of the straight-coordinate data
    from test_curvature import _sheared_block

    rho = _sheared_block("x2")
    x1, x2 = Polynomial.variable("x1"), Polynomial.variable("x2")
    theta = dform(rho.chart, "x2", "x3", "x4")
    assert norm_sq(rho, theta) == Polynomial.constant(-1)
    straightened = x1 + x2 * x2 * Fraction(1, 2)
    H = (
        straightened * straightened
        + x2 ** 2
        + Polynomial.variable("x3") ** 2
        + Polynomial.variable("x4") ** 2
    ) * Fraction(1, 8)
    build = build_alpha_background(rho, theta, H)
    assert build.conditions.passed
    for check in (check_closedness, check_maxwell, check_einstein):
        assert check(build.background).passed


def test_einstein_fails_for_wrong_potential():
    build = build_alpha_background(
        rho_flat(), dform(rho_flat().chart, "x2", "x3", "x4"), quadratic_H(Fraction(1, 4))
    )
    result = check_einstein(build.background)
    assert not result.passed
    res = result.residuals["einstein_residual"]
    u = build.background.product.chart.index_of("u")
    # only the uu-entry can be nonzero for this family
    nonzero = [
        (i, j)
        for i in range(11)
        for j in range(11)
        if not res[i][j].is_zero()
    ]
    assert nonzero == [(u, u)]


# -- split blocks ---------------------------------------------------------------------------

def test_split_einstein_blocks_match_direct_full_ansatz():
    for f in (1, 2):
        bg = full_ansatz_background(f=f)
        result = split_einstein(bg)
        assert not result.skipped


def test_split_einstein_blocks_match_direct_random():
    for seed in (11, 12):
        bg = full_ansatz_background(monomial=False, seed=seed)
        split_einstein(bg)


def test_four_piece_ansatz_block_laws_and_mixed_block():
    # the shape without the 2-form/2-form pairing still satisfies every
    # block law; its mixed Einstein block keeps only the outer two terms
    rng = random.Random(77)
    base = standard_base()
    fiber = make_metric(
        Chart("l6q", ("w0", "w1", "w2", "w3", "w4", "w5")),
        diag(1, -1, -1, -1, -1, -1),
        signature=(1, 5),
    )
    pc = build_product(base, fiber, 1)
    ansatz = FluxAnsatz(
        alpha_t=random_form(rng, fiber.chart, 4, terms=2),
        beta_t=random_form(rng, fiber.chart, 3, terms=2),
        varpi_t=random_form(rng, fiber.chart, 1, terms=2),
        nu=random_form(rng, base.chart, 1, terms=2),
        epsilon=random_form(rng, base.chart, 3, terms=2),
        theta=random_form(rng, base.chart, 4, terms=2),
    )
    bg = assemble_flux(pc, ansatz)
    check_maxwell(bg)  # typed system cross-checks
    split_einstein(bg)  # HH/VV/HV block laws
    direct, block = flux_norm_sq(bg)
    assert direct == block


def test_split_einstein_on_restricted_shapes_has_zero_hv():
    # shapes with at most one fiber/base pairing have trivially zero mixed block
    build = build_varpi_epsilon_background(rho_flat(), quadratic_H(Fraction(1, 4)))
    result = split_einstein(build.background)
    assert all(e.is_zero() for row in result.residuals["hv_block"] for e in row)


def test_alpha_beta_nu_family_literal_has_uu_residual_only():
    rho = rho_flat()
    omega3 = DifferentialForm.monomial(rho.chart, ("x2", "x3", "x4"), Polynomial.variable("x2"))
    H = (Polynomial.variable("x1") ** 4 + Polynomial.variable("x2") ** 4) * Fraction(1, 12)
    build = build_alpha_beta_nu_background(rho, omega3, H)
    assert build.derived["omega2"] == DifferentialForm.monomial(rho.chart, ("x3", "x4"), -P1)
    assert check_closedness(build.background).passed
    assert check_maxwell(build.background).passed
    res = einstein_residual_matrix(build.background)
    u = build.background.product.chart.index_of("u")
    x1 = Polynomial.variable("x1")
    y1 = Polynomial.variable("y1")
    assert res[u][u] == (x1 * x1 - y1 * y1) * Fraction(1, 2)
    nonzero = [(i, j) for i in range(11) for j in range(11) if not res[i][j].is_zero()]
    assert nonzero == [(u, u)]


def test_alpha_beta_nu_family_corrected_instance_passes():
    rho = rho_flat()
    x1, x2 = Polynomial.variable("x1"), Polynomial.variable("x2")
    # harmonic-source 3-form: dual of d(x1 x2), closed and co-closed
    omega3 = DifferentialForm.monomial(rho.chart, ("x1", "x3", "x4"), x1) + DifferentialForm.monomial(
        rho.chart, ("x2", "x3", "x4"), -x2
    )
    H = (x1 ** 4 + x2 ** 4) * Fraction(1, 12)
    base = standard_base()
    nu = DifferentialForm.coordinate_differential(base.chart, "y1")
    build = build_alpha_beta_nu_background(rho, omega3, H, base=base, nu=nu)
    assert build.derived["omega2"].is_zero()
    assert build.conditions.passed
    assert check_closedness(build.background).passed
    assert check_maxwell(build.background).passed
    assert check_einstein(build.background).passed
