"""Four-dimensional SKR (special Kahler-Ricci potential) geometry.

An SKR metric on a disc bundle over a Riemann surface is determined, on the
regular set of its Killing potential tau, by a single profile function: phi of
tau together with the constant c_bar in the irreducible case, or a positive
Q of tau in the reducible (local product) case.  This module derives the
associated eigenfunctions phi, psi and Q, the curvature components in the
adapted orthonormal frame, closed-form expressions for the equivariant
Hirzebruch L-form, the boundary data at {tau = 0}, and the closed series
formula for the pull-back of the degree-3 transgression of the L-form,
alongside the generic-machinery route through :mod:`equichar.charforms`.

Frame conventions: e_1 is a normalized horizontal lift, e_2 = J e_1,
e_3 = u/sqrt(Q) for the Killing field u, and e_4 = -v/sqrt(Q) for the
gradient v of tau, which is outward pointing at the boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional

import numpy as np

from .charforms import ConnectionFamily, QuadratureSpec, transgression_degree3
from .errors import ProfileError, SingularInputError
from .exterior import ExteriorForm
from .matforms import (
    DEFAULT_SERIES_ORDER,
    AnalyticGerm,
    FormMatrix,
    hirzebruch_l_log_germ,
    mat_mul,
)

__all__ = [
    "SKRProfile",
    "DerivedFunctions",
    "CurvatureComponents",
    "BoundaryData",
    "derived_functions",
    "curvature_components",
    "curvature_matrix",
    "nabla_x_matrix",
    "equivariant_curvature_matrix",
    "eigenvalue_square",
    "sqrt_a_coeffs",
    "l_form_closed",
    "l4_coefficient",
    "volume_weight",
    "boundary_data",
    "boundary_family",
    "transgression_pullback_closed",
    "transgression_pullback_direct",
    "closed_transgression_integrand",
]

_FD_STEP = 1e-5  # central-difference step for missing second derivatives


def _central_d(fn: Callable[[float], float], x: float, h: float = _FD_STEP) -> float:
    return (fn(x + h) - fn(x - h)) / (2.0 * h)


@dataclass(frozen=True)
class SKRProfile:
    """Profile data of a fibered SKR metric on a disc bundle.

    Irreducible mode needs ``phi`` (nowhere zero on [tau_min, 0]) and the
    constant ``c_bar`` outside the tau range; Q = 2(tau - c_bar) phi and
    psi = Q'/2 are derived.  Reducible mode needs a positive ``q_fun``;
    phi vanishes identically there.  Derivative callables are optional and
    fall back to central differences.

    ``base_curv`` is the base-surface curvature constant entering the
    horizontal curvature component linearly; ``base_area`` and
    ``fiber_period`` are the topology constants of the volume reduction
    (the circle orbit is assigned parameter length 2 pi by default).
    """

    mode: str
    c_bar: float = -1.0
    a_const: float = 1.0
    base_curv: float = 0.0
    tau_min: float = -0.5
    base_area: float = 1.0
    fiber_period: float = 2.0 * math.pi
    phi: Optional[Callable[[float], float]] = field(default=None, compare=False)
    phi_d: Optional[Callable[[float], float]] = field(default=None, compare=False)
    phi_dd: Optional[Callable[[float], float]] = field(default=None, compare=False)
    q_fun: Optional[Callable[[float], float]] = field(default=None, compare=False)
    q_fun_d: Optional[Callable[[float], float]] = field(default=None, compare=False)
    q_fun_dd: Optional[Callable[[float], float]] = field(default=None, compare=False)
    label: str = ""

    def __post_init__(self):
        if self.mode not in ("irreducible", "reducible"):
            raise ProfileError(f"unknown mode {self.mode!r}")
        if not self.tau_min < 0.0:
            raise ProfileError("tau_min must be negative (the boundary sits at tau = 0)")
        if self.a_const == 0.0:
            raise ProfileError("a_const must be nonzero")
        if self.mode == "irreducible":
            if self.phi is None:
                raise ProfileError("irreducible profile needs phi")
            if self.tau_min <= self.c_bar <= 0.0:
                raise ProfileError("c_bar must lie outside [tau_min, 0]")
        else:
            if self.q_fun is None:
                raise ProfileError("reducible profile needs q_fun")
        self.validate()

    # ------------------------------------------------------------------ validation

    def validate(self, samples: int = 50) -> None:
        """Check Q > 0 (and phi of one sign, irreducible) on (tau_min, 0]."""
        taus = np.linspace(self.tau_min, 0.0, samples + 1)[1:]
        for tau in taus:
            d = derived_functions(self, float(tau))
            if self.mode == "irreducible" and d.phi == 0.0:
                raise ProfileError(f"phi vanishes at tau = {tau:.6g}")
        # derived_functions already raises on Q <= 0

    # ------------------------------------------------------------------ factories

    @classmethod
    def irreducible_polynomial(cls, phi_coeffs, c_bar, **kw) -> "SKRProfile":
        """Irreducible profile with phi a polynomial (coefficients lowest first)."""
        poly = np.polynomial.Polynomial(tuple(float(c) for c in phi_coeffs))
        d1 = poly.deriv(1)
        d2 = poly.deriv(2)
        return cls(
            mode="irreducible",
            c_bar=float(c_bar),
            phi=lambda t: float(poly(t)),
            phi_d=lambda t: float(d1(t)),
            phi_dd=lambda t: float(d2(t)),
            **kw,
        )

    @classmethod
    def reducible_polynomial(cls, q_coeffs, **kw) -> "SKRProfile":
        """Reducible profile with Q a positive polynomial (coefficients lowest first)."""
        poly = np.polynomial.Polynomial(tuple(float(c) for c in q_coeffs))
        d1 = poly.deriv(1)
        d2 = poly.deriv(2)
        kw.setdefault("c_bar", 1.0)
        return cls(
            mode="reducible",
            q_fun=lambda t: float(poly(t)),
            q_fun_d=lambda t: float(d1(t)),
            q_fun_dd=lambda t: float(d2(t)),
            **kw,
        )


class DerivedFunctions(NamedTuple):
    phi: float
    psi: float
    q: float
    phi_d: float
    psi_d: float


def derived_functions(p: SKRProfile, tau: float) -> DerivedFunctions:
    """phi, psi, Q and derivatives at tau.

    Irreducible: Q = 2(tau - c_bar) phi, psi = phi + (tau - c_bar) phi',
    psi' = 2 phi' + (tau - c_bar) phi''.  Reducible: phi = 0, Q = q_fun,
    psi = Q'/2, psi' = Q''/2.
    """
    if p.mode == "irreducible":
        phi = p.phi(tau)
        phi_d = p.phi_d(tau) if p.phi_d is not None else _central_d(p.phi, tau)
        if p.phi_dd is not None:
            phi_dd = p.phi_dd(tau)
        elif p.phi_d is not None:
            phi_dd = _central_d(p.phi_d, tau)
        else:
            phi_dd = (p.phi(tau + _FD_STEP) - 2.0 * phi + p.phi(tau - _FD_STEP)) / _FD_STEP**2
        shift = tau - p.c_bar
        q = 2.0 * shift * phi
        psi = phi + shift * phi_d
        psi_d = 2.0 * phi_d + shift * phi_dd
    else:
        q = p.q_fun(tau)
        q_d = p.q_fun_d(tau) if p.q_fun_d is not None else _central_d(p.q_fun, tau)
        if p.q_fun_dd is not None:
            q_dd = p.q_fun_dd(tau)
        elif p.q_fun_d is not None:
            q_dd = _central_d(p.q_fun_d, tau)
        else:
            q_dd = (p.q_fun(tau + _FD_STEP) - 2.0 * q + p.q_fun(tau - _FD_STEP)) / _FD_STEP**2
        phi, phi_d = 0.0, 0.0
        psi = 0.5 * q_d
        psi_d = 0.5 * q_dd
    if not q > 0.0:
        raise ProfileError(f"Q(tau) = {q:.6g} <= 0 at tau = {tau:.6g}")
    return DerivedFunctions(phi, psi, q, phi_d, psi_d)


@dataclass(frozen=True)
class CurvatureComponents:
    """Curvature entries in the adapted frame: horizontal plane (b), the
    mixed Kahler component (c), the vertical plane (d) and the off-block
    coefficient r = c/2 in the irreducible case."""

    b: float
    c: float
    d: float
    r: float


def curvature_components(p: SKRProfile, tau: float) -> CurvatureComponents:
    d = derived_functions(p, tau)
    if p.mode == "irreducible":
        b = -abs(d.phi / d.q) * p.base_curv - 4.0 * d.phi**2 / d.q
        c = -d.phi_d
        r = -0.5 * d.phi_d
    else:
        b = -p.base_curv
        c = 0.0
        r = 0.0
    return CurvatureComponents(b=b, c=c, d=-d.psi_d, r=r)


def curvature_matrix(cc: CurvatureComponents) -> FormMatrix:
    """The adapted-frame curvature matrix over the 4-dimensional coframe.

    Row/column pattern: the (1,2) entry is b e^12 + c e^34, the (3,4) entry
    c e^12 + d e^34, and the four mixed entries are r(e^13 + e^24) and
    +-r(e^14 - e^23); antisymmetric completion.
    """
    dim = 4
    data = np.zeros((4, 4, 1 << dim))

    def put(i, j, pairs):
        for indices, value in pairs:
            mask = 0
            for idx in indices:
                mask |= 1 << (idx - 1)
            data[i - 1, j - 1, mask] += value
            data[j - 1, i - 1, mask] -= value

    put(1, 2, [((1, 2), cc.b), ((3, 4), cc.c)])
    put(3, 4, [((1, 2), cc.c), ((3, 4), cc.d)])
    put(1, 3, [((1, 3), cc.r), ((2, 4), cc.r)])
    put(1, 4, [((1, 4), cc.r), ((2, 3), -cc.r)])
    put(2, 3, [((1, 4), -cc.r), ((2, 3), cc.r)])
    put(2, 4, [((1, 3), cc.r), ((2, 4), cc.r)])
    return FormMatrix(4, dim, data)


def nabla_x_matrix(phi: float, psi: float, dimension: int = 4) -> FormMatrix:
    """Degree-0 matrix of the Killing field's covariant derivative:
    phi on the horizontal rotation block, psi on the vertical one."""
    mat = np.zeros((4, 4))
    mat[0, 1], mat[1, 0] = phi, -phi
    mat[2, 3], mat[3, 2] = psi, -psi
    return FormMatrix.from_scalar_matrix(mat, dimension)


def equivariant_curvature_matrix(p: SKRProfile, tau: float) -> FormMatrix:
    """Equivariant curvature in the adapted frame.

    The circle action is generated by the Killing field u itself; with the
    flow convention fixed by the closed eigenvalue formulas below, its moment
    endomorphism adds (rather than subtracts) the nabla-u rotation block, so
    the (1,2) entry reads phi + b e^12 + c e^34.
    """
    d = derived_functions(p, tau)
    cc = curvature_components(p, tau)
    return curvature_matrix(cc) + nabla_x_matrix(d.phi, d.psi, dimension=4)


def eigenvalue_square(phi: float, psi: float, cc: CurvatureComponents) -> ExteriorForm:
    """The even form A with spec(R_g) = {0, 0, +-i sqrt(A)}:

    A = phi^2 + psi^2 + 2(phi b + psi c) e^12 + 2(phi c + psi d) e^34
        + 2(bc + cd - 4r^2) e^1234.
    """
    return ExteriorForm(
        4,
        {
            (): phi * phi + psi * psi,
            (1, 2): 2.0 * (phi * cc.b + psi * cc.c),
            (3, 4): 2.0 * (phi * cc.c + psi * cc.d),
            (1, 2, 3, 4): 2.0 * (cc.b * cc.c + cc.c * cc.d - 4.0 * cc.r**2),
        },
    )


class SqrtACoeffs(NamedTuple):
    alpha: float
    beta: float
    gamma: float
    delta: float


def sqrt_a_coeffs(phi: float, psi: float, cc: CurvatureComponents) -> SqrtACoeffs:
    """Coefficients of sqrt(A) = alpha + beta e^12 + gamma e^34 + delta e^1234.

    Solves the square identity coefficient by coefficient; singular when
    phi = psi = 0 (use the generic germ route near that limit instead).
    """
    norm2 = phi * phi + psi * psi
    if norm2 == 0.0:
        raise SingularInputError("sqrt_a_coeffs undefined at phi = psi = 0")
    alpha = math.sqrt(norm2)
    beta = (cc.b * phi + cc.c * psi) / alpha
    gamma = (cc.c * phi + cc.d * psi) / alpha
    delta = (
        (cc.c * cc.d - 4.0 * cc.r**2) * phi * phi
        + (cc.b * cc.c - 4.0 * cc.r**2) * psi * psi
        - phi * psi * (cc.b * cc.d + cc.c * cc.c)
    ) / alpha**3
    return SqrtACoeffs(alpha, beta, gamma, delta)


def _lbar_triple(germ: AnalyticGerm, x: float):
    """(Lbar, Lbar', Lbar'') at x for Lbar(y) = exp(2 f(iy)), the restriction of
    the inner L-function to rotation angles."""
    near = abs((x + math.pi) % (2.0 * math.pi) - math.pi)  # distance to 2 pi Z
    if x != 0.0 and near < 1e-8:
        raise SingularInputError(f"L-function pole at rotation angle {x:.6g}")
    value = math.exp(2.0 * germ.eval_i(x))
    d1 = germ.eval_i_d1(x)
    d2 = germ.eval_i_d2(x)
    return value, -2.0 * d1 * value, (4.0 * d1 * d1 - 2.0 * d2) * value


def l_form_closed(p: SKRProfile, tau: float) -> ExteriorForm:
    """Closed-form equivariant L-form via the eigenvalue route:

    Lbar(alpha) + Lbar'(alpha)(beta e^12 + gamma e^34 + delta e^1234)
    + Lbar''(alpha) beta gamma e^1234.
    """
    d = derived_functions(p, tau)
    cc = curvature_components(p, tau)
    sq = sqrt_a_coeffs(d.phi, d.psi, cc)
    f0, f1, f2 = _lbar_triple(hirzebruch_l_log_germ(), sq.alpha)
    return ExteriorForm(
        4,
        {
            (): f0,
            (1, 2): f1 * sq.beta,
            (3, 4): f1 * sq.gamma,
            (1, 2, 3, 4): f1 * sq.delta + f2 * sq.beta * sq.gamma,
        },
    )


def l4_coefficient(p: SKRProfile, tau: float) -> float:
    """Degree-4 coefficient of the closed-form equivariant L-form."""
    return l_form_closed(p, tau).coefficient((1, 2, 3, 4))


def volume_weight(p: SKRProfile, tau: float) -> float:
    """Radial density of the volume form: 2|tau - c_bar| (irreducible) or 1."""
    if p.mode == "irreducible":
        return 2.0 * abs(tau - p.c_bar)
    return 1.0


# --------------------------------------------------------------------------- boundary data

@dataclass(frozen=True)
class BoundaryData:
    """Everything pulled back to the boundary {tau = 0}.

    theta is the second-fundamental-form difference matrix with 1-form
    entries k e^1, k e^2, l e^3 in the last column (k = phi0/sqrt(Q0),
    l = psi0/sqrt(Q0)); a1/a2/a3 are the pieces of the pulled-back curvature
    of the connection family, i* R^t = a1 + t a2 + t^2 a3.
    """

    phi0: float
    psi0: float
    q0: float
    k: float
    l: float
    r_1234: float
    r_2314: float
    r0_1212: float
    r0_2323: float
    theta: FormMatrix
    a1: FormMatrix
    a2: FormMatrix
    a3: FormMatrix

    def nabla_tx(self, t: float) -> FormMatrix:
        return nabla_x_matrix(self.phi0, t * self.psi0, dimension=3)


def boundary_data(p: SKRProfile) -> BoundaryData:
    d = derived_functions(p, 0.0)
    cc = curvature_components(p, 0.0)
    sqrt_q0 = math.sqrt(d.q)
    k = d.phi / sqrt_q0
    l = d.psi / sqrt_q0

    if p.mode == "irreducible":
        r0_1212 = 2.0 * abs(p.c_bar) * p.base_curv + 3.0 * d.q / (4.0 * p.c_bar**2)
        r0_2323 = -d.q / (4.0 * p.c_bar**2)
    else:
        # flat disc bundle: the boundary is an honest product of base and
        # circle, so the horizontal block agrees with the bulk one and the
        # mixed planes are flat (neither value enters any computed quantity)
        r0_1212 = -p.base_curv
        r0_2323 = 0.0

    dim = 3
    data = np.zeros((4, 4, 1 << dim))

    def e(*indices):
        mask = 0
        for idx in indices:
            mask |= 1 << (idx - 1)
        return mask

    theta = np.zeros((4, 4, 1 << dim))
    theta[0, 3, e(1)] = k
    theta[1, 3, e(2)] = k
    theta[2, 3, e(3)] = l
    theta -= theta.transpose(1, 0, 2)
    theta_m = FormMatrix(4, dim, theta)

    a1 = np.zeros((4, 4, 1 << dim))
    a1[0, 1, e(1, 2)] = r0_1212
    a1[0, 2, e(1, 3)] = r0_2323  # equal 13/23 sectional blocks on the boundary
    a1[1, 2, e(2, 3)] = r0_2323
    a1 -= a1.transpose(1, 0, 2)

    a2 = np.zeros((4, 4, 1 << dim))
    a2[0, 3, e(2, 3)] = -cc.r
    a2[1, 3, e(1, 3)] = cc.r
    a2[2, 3, e(1, 2)] = cc.c
    a2 -= a2.transpose(1, 0, 2)

    a3_m = mat_mul(theta_m, theta_m)

    return BoundaryData(
        phi0=d.phi,
        psi0=d.psi,
        q0=d.q,
        k=k,
        l=l,
        r_1234=cc.c,
        r_2314=-cc.r,
        r0_1212=r0_1212,
        r0_2323=r0_2323,
        theta=theta_m,
        a1=FormMatrix(4, dim, a1),
        a2=FormMatrix(4, dim, a2),
        a3=a3_m,
    )


def boundary_family(p: SKRProfile, bd: Optional[BoundaryData] = None) -> ConnectionFamily:
    """The boundary connection family feeding the generic transgression."""
    bd = bd if bd is not None else boundary_data(p)

    def curvature_at(t: float) -> FormMatrix:
        return bd.a1 + bd.a2 * t + bd.a3 * (t * t)

    return ConnectionFamily(theta=bd.theta, nabla_x_at=bd.nabla_tx, curvature_at=curvature_at)


# --------------------------------------------------------------------------- transgression

def _m_sum(phi: float, b: float, m: int, parity: int) -> float:
    """sum over k of given parity of phi^k b^(2m-k) + b^k phi^(2m-k); odd runs
    k = 1..2m-1, even runs k = 0..2m."""
    start = 1 if parity else 0
    acc = 0.0
    for kk in range(start, 2 * m - start + 1, 2):
        acc += phi**kk * b ** (2 * m - kk) + b**kk * phi ** (2 * m - kk)
    return acc


def closed_transgression_integrand(
    bd: BoundaryData,
    t: float,
    germ: Optional[AnalyticGerm] = None,
    order: int = DEFAULT_SERIES_ORDER,
    nabla_scale: float = 1.0,
) -> float:
    """Coefficient of e^123 in the closed-series transgression integrand at t.

    ``nabla_scale`` rescales the Killing-derivative arguments only (the
    second-fundamental-form data k, l and the curvature inputs stay fixed);
    the scale-to-zero limit recovers f''(0) Tr[Theta R^t].
    """
    g = germ if germ is not None else hirzebruch_l_log_germ()
    phi = nabla_scale * bd.phi0
    tpsi = t * nabla_scale * bd.psi0
    weight = math.exp(2.0 * (g.eval_i(phi) + g.eval_i(tpsi)))
    f1_phi = g.eval_i_d1(phi)
    f1_tpsi = g.eval_i_d1(tpsi)
    f2_tpsi = g.eval_i_d2(tpsi)

    # product of the two single-trace terms; products of f'(i.) values are
    # real and carry one overall minus sign
    term1 = 4.0 * bd.l * (
        -(t * t * bd.k * bd.k - bd.r0_1212) * f1_phi * f1_tpsi
        + t * bd.r_1234 * f1_tpsi * f1_tpsi
    )

    series = 0.0
    for m in range(order + 1):
        a_m = (2 * m + 2) * g.coeff(2 * m + 2)
        if a_m == 0.0:
            continue
        sgn = -1.0 if m % 2 else 1.0
        odd_sum = _m_sum(phi, tpsi, m, parity=1)
        even_sum = _m_sum(phi, tpsi, m, parity=0)
        series += a_m * (
            (sgn * bd.r0_2323 - sgn * t * t * bd.k * bd.l) * odd_sum
            - sgn * t * bd.r_2314 * even_sum
        )
    term2 = 2.0 * bd.k * series

    term3 = -2.0 * t * bd.l * bd.r_1234 * f2_tpsi
    return weight * (term1 + term2 + term3)


def closed_transgression_tail(bd: BoundaryData, order: int, germ=None) -> float:
    """Coarse bound on the dropped series tail of the closed integrand."""
    g = germ if germ is not None else hirzebruch_l_log_germ()
    rho = max(abs(bd.phi0), abs(bd.psi0))
    scale = abs(bd.r0_2323) + abs(bd.phi0 * bd.psi0 / bd.q0) + abs(bd.r_2314)
    tail = 0.0
    for m in range(order + 1, order + 5):
        a_m = abs((2 * m + 2) * g.coeff(2 * m + 2))
        tail += a_m * 2.0 * (2 * m + 1) * rho ** (2 * m) * scale
    return 2.0 * abs(bd.k) * tail


def transgression_pullback_closed(
    p: SKRProfile,
    order: int = DEFAULT_SERIES_ORDER,
    quad: QuadratureSpec = QuadratureSpec(),
) -> ExteriorForm:
    """Closed-series route to the boundary pull-back of the degree-3
    transgression of the equivariant L-form; a multiple of e^123."""
    bd = boundary_data(p)
    germ = hirzebruch_l_log_germ()
    xs, ws = quad.rule()
    acc = 0.0
    for x, w in zip(xs, ws):
        acc += float(w) * closed_transgression_integrand(bd, float(x), germ, order)
    return ExteriorForm(3, {(1, 2, 3): acc})


def transgression_pullback_direct(
    p: SKRProfile,
    order: int = DEFAULT_SERIES_ORDER,
    quad: QuadratureSpec = QuadratureSpec(),
) -> ExteriorForm:
    """Generic-machinery route: the boundary family pushed through the
    degree-3 transgression integrand."""
    fam = boundary_family(p)
    return transgression_degree3(hirzebruch_l_log_germ(), fam, quad, order)
