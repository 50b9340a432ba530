import math

import numpy as np
import pytest

from equichar import skr
from equichar.exterior import ExteriorForm, _degree_masks, degree_component, exp_form, wedge
from equichar.charforms import (
    ConnectionFamily,
    QuadratureSpec,
    a_hat_form,
    chern_form,
    equivariant_curvature,
    l_form,
    product_transgression,
    transgression,
    transgression_degree3,
    transgression_degree3_alt,
)
from equichar.matforms import (
    FormMatrix,
    apply_germ,
    a_hat_inner_germ,
    hirzebruch_l_log_germ,
    mat_mul,
    star_second,
    trace,
)

QUAD = QuadratureSpec(32)
GERM = hirzebruch_l_log_germ()


def rand_antisym(size, dim, degree, scale, rng):
    deg = _degree_masks(dim)
    data = np.zeros((size, size, 1 << dim))
    for i in range(size):
        for j in range(i + 1, size):
            vec = np.where(deg == degree, rng.uniform(-scale, scale, 1 << dim), 0.0)
            data[i, j], data[j, i] = vec, -vec
    return FormMatrix(size, dim, data)


def random_family(rng, dim=3):
    theta = rand_antisym(4, dim, 1, 0.4, rng)
    n0 = rand_antisym(4, dim, 0, 0.3, rng)
    n1 = rand_antisym(4, dim, 0, 0.3, rng)
    a1 = rand_antisym(4, dim, 2, 0.4, rng)
    a2 = rand_antisym(4, dim, 2, 0.4, rng)
    a3 = rand_antisym(4, dim, 2, 0.4, rng)
    return ConnectionFamily.from_endpoints(
        theta, n0, n1, lambda t: a1 + a2 * t + a3 * (t * t)
    )


# ----------------------------------------------------------------- equivariant curvature

def test_equivariant_curvature_zero():
    assert equivariant_curvature(FormMatrix(4, 4), FormMatrix(4, 4)).max_abs() == 0.0


def test_equivariant_curvature_skr_display(worked_profile):
    """The adapted-frame equivariant matrix has block entries
    phi + b e12 + c e34 and psi + c e12 + d e34 with the r-blocks unchanged.
    The Killing field's moment enters with the opposite sign of its
    flow generator, hence the minus-signed second argument here."""
    d = skr.derived_functions(worked_profile, 0.0)
    cc = skr.curvature_components(worked_profile, 0.0)
    rg = equivariant_curvature(
        skr.curvature_matrix(cc), skr.nabla_x_matrix(-d.phi, -d.psi)
    )
    assert (rg - skr.equivariant_curvature_matrix(worked_profile, 0.0)).max_abs() == 0.0
    a_entry = rg.entry(0, 1)
    assert a_entry.coefficient(()) == d.phi
    assert a_entry.coefficient((1, 2)) == cc.b
    assert a_entry.coefficient((3, 4)) == cc.c
    b_entry = rg.entry(2, 3)
    assert b_entry.coefficient(()) == d.psi
    assert b_entry.coefficient((1, 2)) == cc.c
    assert b_entry.coefficient((3, 4)) == cc.d
    assert rg.entry(0, 2).coefficient((1, 3)) == cc.r
    assert rg.entry(0, 3).coefficient((2, 3)) == -cc.r


def test_equivariant_curvature_size_mismatch():
    from equichar.errors import DimensionMismatchError

    with pytest.raises(DimensionMismatchError):
        equivariant_curvature(FormMatrix(4, 4), FormMatrix(3, 4))


def test_equivariant_curvature_reducible_blocks():
    p = skr.SKRProfile.reducible_polynomial([1.0, 0.4, -0.2], base_curv=0.7, tau_min=-0.4)
    rg = skr.equivariant_curvature_matrix(p, -0.1)
    # off-diagonal 2x2 blocks vanish: c = r = 0 and phi = 0
    for i in (0, 1):
        for j in (2, 3):
            assert rg.entry(i, j).max_abs() == 0.0


# ----------------------------------------------------------------- characteristic forms

def test_l_form_at_zero():
    out = l_form(FormMatrix(4, 4))
    assert out.coefficient(()) == 1.0
    assert (out - ExteriorForm.scalar(4, 1.0)).max_abs() == 0.0


def test_l_form_degree0_is_product_of_angles(worked_profile):
    d = skr.derived_functions(worked_profile, -0.2)
    rg = skr.equivariant_curvature_matrix(worked_profile, -0.2)
    got = l_form(rg).coefficient(())
    want = math.exp(2.0 * (GERM.eval_i(d.phi) + GERM.eval_i(d.psi)))
    assert abs(got - want) < 1e-12


def test_l_form_classical_degree4(rng):
    """X = 0: degree-4 coefficient equals the quadratic Taylor term of the
    half-log germ paired with Tr[R ^ R] (independent expansion oracle)."""
    r = rand_antisym(4, 4, 2, 0.7, rng)
    got = l_form(r).coefficient((1, 2, 3, 4))
    tr_rr = ExteriorForm.zero(4)
    for i in range(4):
        for j in range(4):
            tr_rr = tr_rr + wedge(r.entry(i, j), r.entry(j, i))
    want = GERM.coeff(2) * tr_rr.coefficient((1, 2, 3, 4))
    assert abs(got - want) < 1e-14


def test_a_hat_at_zero():
    assert a_hat_form(FormMatrix(4, 4)).coefficient(()) == 1.0


def test_a_hat_rotation_degree0():
    mat = np.zeros((4, 4))
    mat[0, 1], mat[1, 0] = 0.8, -0.8
    rg = FormMatrix.from_scalar_matrix(mat, 4)
    got = a_hat_form(rg).coefficient(())
    want = (0.8 / 2.0) / math.sin(0.8 / 2.0)
    assert abs(got - want) < 1e-12


def test_a_hat_inner_series_relation():
    g = a_hat_inner_germ()
    assert abs(g.taylor[0] - 1.0) < 1e-15
    assert abs(g.taylor[2] + 1.0 / 24.0) < 1e-15


def test_chern_form_zero_curvature():
    assert chern_form(FormMatrix(3, 4), (1, 1, 1)).coefficient(()) == 3.0
    assert chern_form(FormMatrix(4, 4), (1, 1, -1, -1)).max_abs() == 0.0


def test_chern_form_rank_one_nilpotent():
    c = 0.7
    fg = FormMatrix.from_entries([[ExteriorForm(4, {(1, 2): c})]])
    out = chern_form(fg, (1,))
    assert out.coefficient(()) == 1.0
    assert abs(out.coefficient((1, 2)) + c) < 1e-15
    assert out.coefficient((1, 2, 3, 4)) == 0.0


def test_chern_form_grading_validation():
    with pytest.raises(Exception):
        chern_form(FormMatrix(4, 4), (1, 1, 1))


# ----------------------------------------------------------------- transgression

def test_transgression_zero_theta(rng):
    fam = random_family(rng)
    fam0 = ConnectionFamily(
        theta=FormMatrix(4, 3), nabla_x_at=fam.nabla_x_at, curvature_at=fam.curvature_at
    )
    assert transgression(GERM, fam0, QUAD).max_abs() == 0.0
    assert transgression_degree3(GERM, fam0, QUAD).max_abs() == 0.0


def test_transgression_constant_family_quadrature_exactness(rng):
    theta = rand_antisym(4, 3, 1, 0.4, rng)
    nx = rand_antisym(4, 3, 0, 0.3, rng)
    rt = rand_antisym(4, 3, 2, 0.4, rng)
    fam = ConnectionFamily(theta=theta, nabla_x_at=lambda t: nx, curvature_at=lambda t: rt)
    rg = equivariant_curvature(rt, nx)
    integrand = wedge(
        exp_form(trace(apply_germ(GERM, rg))),
        trace(mat_mul(theta, apply_germ(GERM.derivative(), rg))),
    )
    got = transgression(GERM, fam, QUAD)
    assert (got - integrand).max_abs() < 1e-14


def test_transgression_degree3_matches_full_on_boundary_family(worked_profile):
    fam = skr.boundary_family(worked_profile)
    full3 = degree_component(transgression(GERM, fam, QUAD), 3)
    red = transgression_degree3(GERM, fam, QUAD)
    assert (full3 - red).max_abs() < 1e-10


def test_transgression_degree3_x_zero_family(rng):
    """With no Killing term the integrand collapses to f''(0) Tr[Theta R^t]."""
    theta = rand_antisym(4, 3, 1, 0.4, rng)
    a1 = rand_antisym(4, 3, 2, 0.4, rng)
    a2 = rand_antisym(4, 3, 2, 0.4, rng)
    curv = lambda t: a1 + a2 * t
    fam = ConnectionFamily(theta=theta, nabla_x_at=lambda t: FormMatrix(4, 3), curvature_at=curv)
    got = transgression_degree3(GERM, fam, QUAD)
    want = QUAD.integrate_forms(
        lambda t: degree_component(trace(mat_mul(theta, curv(t))), 3)
    ) * GERM.second_derivative_at_zero()
    assert (got - want).max_abs() < 1e-15


def test_transgression_degree3_requires_even_germ(rng):
    fam = random_family(rng)
    with pytest.raises(ValueError):
        transgression_degree3(GERM.derivative(), fam, QUAD)


def test_quadrature_node_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(1)


@pytest.mark.parametrize("dim", [3, 4])
def test_route_agreement_randomized(dim):
    """Main equivalences: reduced formula == aesthetic variant == degree-3
    part of the full transgression, on randomized admissible families."""
    rng = np.random.default_rng(101 + dim)
    for _ in range(5):
        fam = random_family(rng, dim)
        t3 = transgression_degree3(GERM, fam, QUAD)
        alt = transgression_degree3_alt(GERM, fam, QUAD)
        full = degree_component(transgression(GERM, fam, QUAD), 3)
        scale = max(t3.max_abs(), 1e-6)
        assert (t3 - alt).max_abs() / scale < 1e-10
        assert (t3 - full).max_abs() / scale < 1e-10


@pytest.mark.parametrize("dim", [3, 4])
def test_factorization_identity_randomized(dim):
    """exp Tr f(R - NX) == exp Tr f(NX) (1 - Tr[f'(NX) R]) through degree 3."""
    rng = np.random.default_rng(211 + dim)
    d_germ = GERM.derivative()
    for _ in range(5):
        fam = random_family(rng, dim)
        for t in (0.0, 0.37, 1.0):
            nx, rt = fam.nabla_x_at(t), fam.curvature_at(t)
            lhs = exp_form(trace(apply_germ(GERM, equivariant_curvature(rt, nx))))
            rhs = wedge(
                exp_form(trace(apply_germ(GERM, nx))),
                ExteriorForm.scalar(dim, 1.0) - trace(mat_mul(apply_germ(d_germ, nx), rt)),
            )
            for k in range(min(dim, 3) + 1):
                assert (degree_component(lhs, k) - degree_component(rhs, k)).max_abs() < 1e-10


@pytest.mark.parametrize("dim", [3, 4])
def test_expansion_identity_randomized(dim):
    """f'(R - NX) == -f'(NX) + star(f, NX, R) entry-wise through degree 3."""
    rng = np.random.default_rng(307 + dim)
    d_germ = GERM.derivative()
    for _ in range(5):
        fam = random_family(rng, dim)
        nx, rt = fam.nabla_x_at(0.61), fam.curvature_at(0.61)
        lhs = apply_germ(d_germ, equivariant_curvature(rt, nx))
        rhs = star_second(GERM, nx, rt) - apply_germ(d_germ, nx)
        for i in range(4):
            for j in range(4):
                diff = lhs.entry(i, j) - rhs.entry(i, j)
                for k in range(min(dim, 3) + 1):
                    assert degree_component(diff, k).max_abs() < 1e-10


def test_x_to_zero_limit_order(rng):
    """Scaling the Killing block by s, the reduced transgression converges to
    f''(0) * int Tr[Theta R^t] dt at measured order >= 1.9."""
    fam = random_family(rng)
    ref = QUAD.integrate_forms(
        lambda t: degree_component(trace(mat_mul(fam.theta, fam.curvature_at(t))), 3)
    ) * GERM.second_derivative_at_zero()
    scales = (1e-1, 1e-2, 1e-3)
    errs = []
    for s in scales:
        fam_s = ConnectionFamily(
            theta=fam.theta,
            nabla_x_at=lambda t, s=s: fam.nabla_x_at(t) * s,
            curvature_at=fam.curvature_at,
        )
        errs.append((transgression_degree3(GERM, fam_s, QUAD) - ref).max_abs())
    slope = np.polyfit(np.log(scales), np.log(errs), 1)[0]
    assert slope >= 1.9


# ----------------------------------------------------------------- product rule

def test_product_transgression_units(rng):
    dim = 3
    t1 = ExteriorForm(dim, {(1,): 0.4, (1, 2, 3): -0.2})
    one = ExteriorForm.scalar(dim, 1.0)
    zero = ExteriorForm.zero(dim)
    assert (product_transgression(t1, one, one, zero) - t1).max_abs() == 0.0
    assert (product_transgression(zero, one, one, t1) - t1).max_abs() == 0.0


def test_product_transgression_bilinear_expansion(rng):
    dim = 4
    vals = np.random.default_rng(43).uniform(-1, 1, (4, 16))
    t1, b2, b1, t2 = (ExteriorForm(dim, v) for v in vals)
    got = product_transgression(t1, b2, b1, t2)
    want = wedge(t1, b2) + wedge(b1, t2)
    assert (got - want).max_abs() == 0.0
