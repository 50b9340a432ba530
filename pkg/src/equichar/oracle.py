"""Finite-difference differential geometry on an explicit SKR coordinate chart.

This is the independent validation engine: it never touches the closed
curvature formulas of :mod:`equichar.skr`.  It builds the metric tensor of a
flat-base chart realizing the SKR classification, differentiates it with
central differences, and produces Christoffel symbols, frame curvature
components, connection 1-forms and Kahler defects that the test suite
compares against the closed expressions.

Chart: coordinates (tau, s, x, y) with fiber angle s, flat base h = dx^2+dy^2
(so the base curvature constant is 0 here) and connection potential
theta = a(ds + 2 sigma x dy) with sigma the constant sign of tau - c_bar on
the chart; closedness of the Kahler form dtau ^ theta/a + 2|tau - c_bar|
dx ^ dy forces exactly this twist, one sign per branch of c_bar.  The
reducible case is the flat bundle theta = a ds.  The frame is e_1 ~ d/dx,
e_2 = J e_1, e_3 = u/sqrt(Q), e_4 = -v/sqrt(Q) with v the gradient of tau and
u its rotation by J.

Curvature sign convention: components are reported as
R_{ijkl} = -<[nabla_i, nabla_j] e_k - nabla_{[e_i,e_j]} e_k, e_l>,
matching the closed-formula convention of the skr module (vertical block
component R_3434 equals -psi').
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ProfileError
from .skr import SKRProfile, derived_functions

__all__ = [
    "ChartPoint",
    "MetricSample",
    "metric_at",
    "frame_at",
    "christoffel_fd",
    "riemann_coord_fd",
    "riemann_frame_fd",
    "connection_oneform_fd",
    "kahler_defect_fd",
    "pregeodesic_defect_fd",
    "volume_integral_chart",
    "DEFAULT_FD_STEP",
]

DEFAULT_FD_STEP = 1e-4


@dataclass(frozen=True)
class ChartPoint:
    tau: float
    s: float = 0.0
    x: float = 0.0
    y: float = 0.0

    def coords(self) -> np.ndarray:
        return np.array([self.tau, self.s, self.x, self.y])

    def shifted(self, axis: int, delta: float) -> "ChartPoint":
        c = self.coords()
        c[axis] += delta
        return ChartPoint(*c)


@dataclass(frozen=True)
class MetricSample:
    g: np.ndarray

    def __post_init__(self):
        g = self.g
        if g.shape != (4, 4) or not np.allclose(g, g.T, atol=1e-14):
            raise ProfileError("metric sample must be symmetric 4x4")
        # positive definiteness via leading principal minors
        for k in range(1, 5):
            if np.linalg.det(g[:k, :k]) <= 0.0:
                raise ProfileError("metric sample is not positive definite")


def _metric_matrix(p: SKRProfile, pt: ChartPoint) -> np.ndarray:
    d = derived_functions(p, pt.tau)
    q = d.q
    g = np.zeros((4, 4))
    g[0, 0] = 1.0 / q
    g[1, 1] = q
    if p.mode == "irreducible":
        two_t = 2.0 * abs(pt.tau - p.c_bar)
        twist = 2.0 * _branch_sign(p) * pt.x
        g[1, 3] = g[3, 1] = q * twist
        g[2, 2] = two_t
        g[3, 3] = q * twist * twist + two_t
    else:
        g[2, 2] = 1.0
        g[3, 3] = 1.0
    return g


def _branch_sign(p: SKRProfile) -> float:
    """Constant sign of tau - c_bar on the chart (c_bar avoids [tau_min, 0])."""
    return 1.0 if p.c_bar < p.tau_min else -1.0


def metric_at(p: SKRProfile, pt: ChartPoint) -> MetricSample:
    """Chart metric: (1/Q) dtau^2 + Q (ds + x dy)^2 + 2|tau - c_bar| (dx^2 + dy^2),
    with the conformal factor replaced by 1 and no x-twist in the reducible case."""
    return MetricSample(_metric_matrix(p, pt))


def frame_at(p: SKRProfile, pt: ChartPoint) -> np.ndarray:
    """Rows are the adapted orthonormal frame vectors in chart components."""
    d = derived_functions(p, pt.tau)
    sq = math.sqrt(d.q)
    e = np.zeros((4, 4))
    if p.mode == "irreducible":
        root = math.sqrt(2.0 * abs(pt.tau - p.c_bar))
        e[0, 2] = 1.0 / root
        e[1, 1] = -2.0 * _branch_sign(p) * pt.x / root  # horizontal lift of d/dy kills theta
        e[1, 3] = 1.0 / root
    else:
        e[0, 2] = 1.0
        e[1, 3] = 1.0
    e[2, 1] = 1.0 / sq          # e_3 = u / sqrt(Q), u = d/ds
    e[3, 0] = -sq               # e_4 = -v / sqrt(Q), v = Q d/dtau
    return e


def christoffel_fd(p: SKRProfile, pt: ChartPoint, h_step: float = DEFAULT_FD_STEP) -> np.ndarray:
    """Gamma[k, i, j] = Gamma^k_ij by central differences of the metric."""
    g = _metric_matrix(p, pt)
    g_inv = np.linalg.inv(g)
    dg = np.empty((4, 4, 4))  # dg[m, i, j] = d_m g_ij
    for m in range(4):
        gp = _metric_matrix(p, pt.shifted(m, h_step))
        gm = _metric_matrix(p, pt.shifted(m, -h_step))
        dg[m] = (gp - gm) / (2.0 * h_step)
    gamma = np.empty((4, 4, 4))
    for k in range(4):
        for i in range(4):
            for j in range(4):
                gamma[k, i, j] = 0.5 * sum(
                    g_inv[k, l] * (dg[i, j, l] + dg[j, i, l] - dg[l, i, j]) for l in range(4)
                )
    return gamma


def riemann_coord_fd(
    p: SKRProfile, pt: ChartPoint, h_step: float = DEFAULT_FD_STEP
) -> np.ndarray:
    """Covariant coordinate curvature R[mu, nu, rho, sigma] = <R(d_mu, d_nu) d_rho, d_sigma>
    in the commutator-first convention [nabla_mu, nabla_nu] - nabla_[.,.]."""
    gamma = christoffel_fd(p, pt, h_step)
    dgamma = np.empty((4, 4, 4, 4))  # dgamma[m, k, i, j] = d_m Gamma^k_ij
    for m in range(4):
        gp = christoffel_fd(p, pt.shifted(m, h_step), h_step)
        gm = christoffel_fd(p, pt.shifted(m, -h_step), h_step)
        dgamma[m] = (gp - gm) / (2.0 * h_step)
    # R^sigma_{rho mu nu}
    r_up = np.empty((4, 4, 4, 4))
    for sig in range(4):
        for rho in range(4):
            for mu in range(4):
                for nu in range(4):
                    val = dgamma[mu, sig, nu, rho] - dgamma[nu, sig, mu, rho]
                    for lam in range(4):
                        val += (
                            gamma[sig, mu, lam] * gamma[lam, nu, rho]
                            - gamma[sig, nu, lam] * gamma[lam, mu, rho]
                        )
                    r_up[sig, rho, mu, nu] = val
    g = _metric_matrix(p, pt)
    return np.einsum("srmn,st->mnrt", r_up, g)


def riemann_frame_fd(
    p: SKRProfile,
    pt: ChartPoint,
    h_step: float = DEFAULT_FD_STEP,
    richardson: bool = False,
) -> np.ndarray:
    """Frame curvature components R[i, j, k, l] for the adapted frame, in the
    sign convention of the closed formulas (see module docstring)."""
    r_cov = riemann_coord_fd(p, pt, h_step)
    if richardson:
        r_half = riemann_coord_fd(p, pt, 0.5 * h_step)
        r_cov = (4.0 * r_half - r_cov) / 3.0
    e = frame_at(p, pt)
    return -np.einsum("im,jn,kr,lt,mnrt->ijkl", e, e, e, e, r_cov)


def connection_oneform_fd(
    p: SKRProfile, pt: ChartPoint, h_step: float = DEFAULT_FD_STEP
) -> np.ndarray:
    """nu[i, j, k] = g(nabla_{e_k} e_i, e_j), the frame connection 1-form."""
    gamma = christoffel_fd(p, pt, h_step)
    g = _metric_matrix(p, pt)
    e = frame_at(p, pt)
    de = np.empty((4, 4, 4))  # de[m, i, a] = d_m (e_i)^a
    for m in range(4):
        ep = frame_at(p, pt.shifted(m, h_step))
        em = frame_at(p, pt.shifted(m, -h_step))
        de[m] = (ep - em) / (2.0 * h_step)
    # nabla_{e_k} e_i = e_k^m ( d_m e_i^a + Gamma^a_{m b} e_i^b )
    cov = np.einsum("km,mia->kia", e, de) + np.einsum("km,amb,ib->kia", e, gamma, e)
    return np.einsum("kia,jb,ab->ijk", cov, e, g)


def _complex_structure(p: SKRProfile, pt: ChartPoint) -> np.ndarray:
    """J as a coordinate (1,1)-tensor, assembled from the frame pattern
    J e_1 = e_2, J e_2 = -e_1, J e_3 = e_4, J e_4 = -e_3."""
    e = frame_at(p, pt)
    coframe = np.linalg.inv(e)  # coframe[mu, i] = (e^i)_mu, rows of e are frame vectors
    j = np.zeros((4, 4))
    for a, b, sign in ((1, 0, 1.0), (0, 1, -1.0), (3, 2, 1.0), (2, 3, -1.0)):
        j += sign * np.einsum("m,n->mn", e[a], coframe[:, b])  # sign * e_a (x) e^b
    return j  # j[alpha, beta] = J^alpha_beta


def kahler_defect_fd(
    p: SKRProfile, pt: ChartPoint, h_step: float = DEFAULT_FD_STEP
) -> float:
    """max |nabla J| component; vanishes for a Kahler metric."""
    gamma = christoffel_fd(p, pt, h_step)
    dj = np.empty((4, 4, 4))
    for m in range(4):
        jp = _complex_structure(p, pt.shifted(m, h_step))
        jm = _complex_structure(p, pt.shifted(m, -h_step))
        dj[m] = (jp - jm) / (2.0 * h_step)
    j = _complex_structure(p, pt)
    grad = dj + np.einsum("aml,lb->mab", gamma, j) - np.einsum("lmb,al->mab", gamma, j)
    return float(np.max(np.abs(grad)))


def pregeodesic_defect_fd(
    p: SKRProfile, pt: ChartPoint, h_step: float = DEFAULT_FD_STEP
) -> float:
    """Size of the component of nabla_v v orthogonal to v, normalized by |v|^2;
    zero when the gradient flow lines are pre-geodesics."""
    d = derived_functions(p, pt.tau)
    gamma = christoffel_fd(p, pt, h_step)
    # v = Q d/dtau; nabla_v v = Q dQ/dtau d_tau + Q^2 Gamma^l_00 d_l
    dq = (derived_functions(p, pt.tau + h_step).q - derived_functions(p, pt.tau - h_step).q) / (
        2.0 * h_step
    )
    vec = d.q * d.q * gamma[:, 0, 0]
    vec[0] += d.q * dq
    ortho = vec.copy()
    ortho[0] = 0.0  # v-direction is the tau axis
    g = _metric_matrix(p, pt)
    return float(math.sqrt(ortho @ g @ ortho)) / d.q


def volume_integral_chart(
    p: SKRProfile,
    integrand,
    n_tau: int = 24,
    n_fiber: int = 6,
    n_base: int = 6,
    tau_lo: float | None = None,
) -> float:
    """Direct 4-dimensional Gauss-Legendre quadrature of integrand(tau) over the
    chart, with the volume density taken from det(metric_at) numerically.

    The chart covers the full fiber circle and a base rectangle of the
    profile's base_area; used to pin the reduced 1-dimensional convention.
    """
    tau_lo = p.tau_min if tau_lo is None else tau_lo
    side = math.sqrt(p.base_area)

    def rule(n, a, b):
        xs, ws = np.polynomial.legendre.leggauss(n)
        return 0.5 * (b - a) * xs + 0.5 * (a + b), 0.5 * (b - a) * ws

    t_x, t_w = rule(n_tau, tau_lo, 0.0)
    s_x, s_w = rule(n_fiber, 0.0, p.fiber_period)
    b_x, b_w = rule(n_base, 0.0, side)

    total = 0.0
    for tau, wt in zip(t_x, t_w):
        f_val = integrand(float(tau))
        for s, wsv in zip(s_x, s_w):
            for x, wx in zip(b_x, b_w):
                for y, wy in zip(b_x, b_w):
                    g = _metric_matrix(p, ChartPoint(float(tau), float(s), float(x), float(y)))
                    dens = math.sqrt(np.linalg.det(g))
                    total += wt * wsv * wx * wy * f_val * dens
    return total
