import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from equichar import skr
from equichar.errors import ConvergenceRadiusError
from equichar.exterior import ExteriorForm, degree_component, wedge
from equichar.matforms import (
    FormMatrix,
    apply_germ,
    char_poly,
    exp_trace_germ,
    germ_tail_estimate,
    hirzebruch_l_inner_germ,
    hirzebruch_l_log_germ,
    identity,
    mat_mul,
    spectral_radius_degree0,
    star_second,
    trace,
)


def rotation_block(x, psi=0.0, dimension=4):
    mat = np.zeros((4, 4))
    mat[0, 1], mat[1, 0] = x, -x
    mat[2, 3], mat[3, 2] = psi, -psi
    return FormMatrix.from_scalar_matrix(mat, dimension)


# ----------------------------------------------------------------- mat_mul / trace

def test_mat_mul_identity():
    rng = np.random.default_rng(3)
    data = rng.uniform(-1, 1, (4, 4, 16))
    m = FormMatrix(4, 4, data)
    assert (mat_mul(identity(4, 4), m) - m).max_abs() == 0.0
    assert (mat_mul(m, identity(4, 4)) - m).max_abs() == 0.0


def test_theta_square_pattern(worked_profile):
    """Theta^2 has the displayed sparsity: wedge products of the column
    1-forms in the upper-left 3x3 block, empty last row and column."""
    bd = skr.boundary_data(worked_profile)
    sq = mat_mul(bd.theta, bd.theta)
    p = ExteriorForm.basis(3, (1,)) * bd.k
    q = ExteriorForm.basis(3, (2,)) * bd.k
    r = ExteriorForm.basis(3, (3,)) * bd.l
    assert (sq.entry(0, 1) + wedge(p, q)).max_abs() < 1e-15
    assert (sq.entry(0, 2) + wedge(p, r)).max_abs() < 1e-15
    assert (sq.entry(1, 2) + wedge(q, r)).max_abs() < 1e-15
    for i in range(4):
        assert sq.entry(i, 3).max_abs() == 0.0
        assert sq.entry(3, i).max_abs() == 0.0
        assert sq.entry(i, i).max_abs() < 1e-15


def test_mat_mul_degree_additivity():
    rng = np.random.default_rng(5)

    def degree2(seed):
        data = np.zeros((4, 4, 16))
        gen = np.random.default_rng(seed)
        from equichar.exterior import _degree_masks

        deg = _degree_masks(4)
        for i in range(4):
            for j in range(4):
                data[i, j] = np.where(deg == 2, gen.uniform(-1, 1, 16), 0.0)
        return FormMatrix(4, 4, data)

    prod = mat_mul(degree2(1), degree2(2))
    assert prod.degrees_present() <= {4}


def test_trace_antisymmetric_vanishes(worked_profile):
    cc = skr.curvature_components(worked_profile, 0.0)
    assert trace(skr.curvature_matrix(cc)).max_abs() == 0.0


def test_trace_identity():
    assert trace(identity(4, 4)).coefficient(()) == 4.0


def test_trace_product_explicit_sum(worked_profile):
    """trace(Theta R^1) cross-checked against a hand-rolled entry-wise sum."""
    bd = skr.boundary_data(worked_profile)
    r1 = bd.a1 + bd.a2 + bd.a3
    got = trace(mat_mul(bd.theta, r1))
    acc = ExteriorForm.zero(3)
    for i in range(4):
        for j in range(4):
            acc = acc + wedge(bd.theta.entry(i, j), r1.entry(j, i))
    assert (got - acc).max_abs() < 1e-15


# ----------------------------------------------------------------- apply_germ

def test_apply_germ_zero_matrix():
    g = hirzebruch_l_inner_germ()
    out = apply_germ(g, FormMatrix(4, 4))
    assert (out - identity(4, 4)).max_abs() == 0.0


def test_apply_germ_rotation_block_matches_scalar():
    """On a rotation generator of angle x the even germ acts as the scalar
    value of the germ at the imaginary eigenvalue: block f(ix) * I."""
    g = hirzebruch_l_inner_germ()
    for x in (0.2, 0.5, 0.9):
        out = apply_germ(g, rotation_block(x))
        val = g.eval_i(x)
        block = out.degree0()
        assert abs(block[0, 0] - val) < 1e-12
        assert abs(block[1, 1] - val) < 1e-12
        assert abs(block[0, 1]) < 1e-12
        assert abs(block[2, 2] - g.eval_i(0.0)) < 1e-12


def test_apply_germ_trace_degree0():
    g = hirzebruch_l_log_germ()
    for x, psi in ((0.3, 0.6), (0.7, 0.1)):
        tr = trace(apply_germ(g, rotation_block(x, psi)))
        want = 2.0 * (g.eval_i(x) + g.eval_i(psi))
        assert abs(tr.coefficient(()) - want) < 1e-10


def test_apply_germ_radius_violation():
    g = hirzebruch_l_log_germ()  # radius pi
    with pytest.raises(ConvergenceRadiusError) as err:
        apply_germ(g, rotation_block(3.5))
    assert err.value.spectral_radius == pytest.approx(3.5)


def test_tail_estimate_reported_threshold():
    g = hirzebruch_l_log_germ()
    rho = spectral_radius_degree0(rotation_block(0.6, 0.5).degree0())
    assert rho == pytest.approx(0.6)
    assert germ_tail_estimate(g, rho, 16) < 1e-12


# ----------------------------------------------------------------- star_second

def test_star_second_at_zero():
    """Only the n = 1 word survives at a = 0, leaving f''(0) b."""
    g = hirzebruch_l_log_germ()
    rng = np.random.default_rng(11)
    b = FormMatrix(4, 4, rng.uniform(-1, 1, (4, 4, 16)))
    out = star_second(g, FormMatrix(4, 4), b)
    want = b * g.second_derivative_at_zero()
    assert (out - want).max_abs() < 1e-16


def test_star_second_commuting_scalars():
    """For commuting scalar arguments the pairing is the ordinary second
    derivative: star(f, a, b) = f''(a) b, checked against a series oracle."""
    g = hirzebruch_l_log_germ()
    a_val, b_val = 0.4, 0.7
    a = FormMatrix.from_scalar_matrix(a_val * np.eye(4), 4)
    b = FormMatrix.from_scalar_matrix(b_val * np.eye(4), 4)
    out = star_second(g, a, b, order=30)
    # independent oracle: truncated series for f'' at a_val
    f_dd = sum(
        k * (k - 1) * g.coeff(k) * a_val ** (k - 2) for k in range(2, 32)
    )
    assert abs(out.degree0()[0, 0] - f_dd * b_val) < 1e-13


def test_star_second_even_sign_flip_bit_for_bit(worked_profile):
    g = hirzebruch_l_log_germ()
    bd = skr.boundary_data(worked_profile)
    a = bd.nabla_tx(0.7)
    out_pos = star_second(g, a, bd.theta)
    out_neg = star_second(g, a * (-1.0), bd.theta)
    assert np.array_equal(out_pos.data, out_neg.data)


@settings(max_examples=25, deadline=None)
@given(st.floats(-2, 2), st.floats(-2, 2))
def test_star_second_linear_in_b(c1, c2):
    g = hirzebruch_l_log_germ()
    rng = np.random.default_rng(17)
    a = rotation_block(0.3, 0.5)
    b1 = FormMatrix(4, 4, rng.uniform(-1, 1, (4, 4, 16)))
    b2 = FormMatrix(4, 4, rng.uniform(-1, 1, (4, 4, 16)))
    lhs = star_second(g, a, b1 * c1 + b2 * c2)
    rhs = star_second(g, a, b1) * c1 + star_second(g, a, b2) * c2
    assert (lhs - rhs).max_abs() < 1e-12


def test_star_second_requires_degree0():
    g = hirzebruch_l_log_germ()
    bad = FormMatrix(4, 4, np.random.default_rng(0).uniform(-1, 1, (4, 4, 16)))
    with pytest.raises(ValueError):
        star_second(g, bad, bad)


def test_trace_cyclic_with_degree0_factor(rng):
    """trace(P A B) = trace(A B P) exactly when P is purely degree 0."""
    p = FormMatrix.from_scalar_matrix(rng.uniform(-1, 1, (4, 4)), 4)
    a = FormMatrix(4, 4, rng.uniform(-1, 1, (4, 4, 16)))
    b = FormMatrix(4, 4, rng.uniform(-1, 1, (4, 4, 16)))
    lhs = trace(mat_mul(p, mat_mul(a, b)))
    rhs = trace(mat_mul(mat_mul(a, b), p))
    assert (lhs - rhs).max_abs() < 1e-14


def test_mat_mul_size_mismatch():
    from equichar.errors import DimensionMismatchError

    with pytest.raises(DimensionMismatchError):
        mat_mul(FormMatrix(4, 4), FormMatrix(3, 4))
    with pytest.raises(DimensionMismatchError):
        mat_mul(FormMatrix(4, 4), FormMatrix(4, 3))


# ----------------------------------------------------------------- exp_trace_germ

def test_exp_trace_zero():
    assert exp_trace_germ(hirzebruch_l_log_germ(), FormMatrix(4, 4)).coefficient(()) == 1.0


def test_exp_trace_pure_degree2_parity():
    rng = np.random.default_rng(23)
    from equichar.exterior import _degree_masks

    deg = _degree_masks(4)
    data = np.zeros((4, 4, 16))
    for i in range(4):
        for j in range(i + 1, 4):
            vec = np.where(deg == 2, rng.uniform(-0.5, 0.5, 16), 0.0)
            data[i, j], data[j, i] = vec, -vec
    out = exp_trace_germ(hirzebruch_l_log_germ(), FormMatrix(4, 4, data))
    assert degree_component(out, 1).is_zero()
    assert degree_component(out, 3).is_zero()
    assert out.coefficient(()) == 1.0


# ----------------------------------------------------------------- spectral radius

def test_spectral_radius_against_eigvals():
    rng = np.random.default_rng(31)
    for n in (2, 3, 4):
        for _ in range(20):
            raw = rng.uniform(-2, 2, (n, n))
            anti = raw - raw.T
            want = float(np.max(np.abs(np.linalg.eigvals(anti))))
            assert spectral_radius_degree0(anti) == pytest.approx(want, abs=1e-10)


def test_spectral_radius_general_is_upper_bound():
    rng = np.random.default_rng(37)
    m = rng.uniform(-1, 1, (4, 4))
    assert spectral_radius_degree0(m) >= float(np.max(np.abs(np.linalg.eigvals(m)))) - 1e-12


# ----------------------------------------------------------------- char poly

def test_char_poly_scalar_matrix():
    mat = np.array([[0.0, 2.0], [-2.0, 0.0]])
    m = FormMatrix.from_scalar_matrix(np.kron(np.eye(2), mat), 4)
    coeffs = char_poly(m)
    # (lambda^2 + 4)^2 = lambda^4 + 8 lambda^2 + 16
    assert coeffs[1].max_abs() < 1e-13
    assert abs(coeffs[2].coefficient(()) - 8.0) < 1e-12
    assert coeffs[3].max_abs() < 1e-13
    assert abs(coeffs[4].coefficient(()) - 16.0) < 1e-12


def test_char_poly_rejects_odd_entries(worked_profile):
    bd = skr.boundary_data(worked_profile)
    with pytest.raises(ValueError):
        char_poly(bd.theta)
