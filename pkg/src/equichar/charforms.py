"""Equivariant characteristic forms and transgressions over generic curvature data.

Everything here is generic over a family of connections presented as matrix
data: the endomorphism-valued difference form Theta, the degree-0 matrices
nabla^t X, and the curvature 2-form matrices R^t.  The SKR-specific geometry
in :mod:`equichar.skr` feeds its boundary data through these entry points,
and the test suite exercises them on randomized families as well.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import DimensionMismatchError
from .exterior import ExteriorForm, degree_component, exp_form, wedge
from .matforms import (
    DEFAULT_SERIES_ORDER,
    AnalyticGerm,
    FormMatrix,
    a_hat_log_germ,
    apply_germ,
    exp_trace_germ,
    hirzebruch_l_log_germ,
    mat_mul,
    star_second,
    trace,
)

__all__ = [
    "QuadratureSpec",
    "ConnectionFamily",
    "equivariant_curvature",
    "l_form",
    "a_hat_form",
    "chern_form",
    "transgression",
    "transgression_degree3",
    "transgression_degree3_alt",
    "product_transgression",
]


@lru_cache(maxsize=None)
def _gauss_legendre_01(n: int):
    nodes, weights = np.polynomial.legendre.leggauss(n)
    # ascending nodes mapped from [-1, 1] to [0, 1]
    return 0.5 * (nodes + 1.0), 0.5 * weights


@dataclass(frozen=True)
class QuadratureSpec:
    """Gauss-Legendre rule on [0, 1]; integrands in t are analytic, so the
    rule converges spectrally and 32 nodes are far more than enough."""

    nodes: int = 32

    def __post_init__(self):
        if self.nodes < 2:
            raise ValueError("quadrature needs at least 2 nodes")

    def rule(self):
        return _gauss_legendre_01(self.nodes)

    def integrate_forms(self, fn: Callable[[float], ExteriorForm]) -> ExteriorForm:
        """sum_i w_i fn(t_i), accumulated left-to-right over ascending nodes."""
        xs, ws = self.rule()
        acc = None
        for x, w in zip(xs, ws):
            term = fn(float(x)) * float(w)
            acc = term if acc is None else acc + term
        return acc


@dataclass(frozen=True)
class ConnectionFamily:
    """A path of connections presented through the three matrices the
    transgression integrand needs.

    theta:        endomorphism-valued 1-form, the difference of the endpoint
                  connections (antisymmetric matrix of 1-forms).
    nabla_x_at:   t -> antisymmetric degree-0 matrix of the Killing field's
                  covariant derivative along the family.
    curvature_at: t -> antisymmetric matrix of curvature 2-forms.
    """

    theta: FormMatrix
    nabla_x_at: Callable[[float], FormMatrix] = field(compare=False)
    curvature_at: Callable[[float], FormMatrix] = field(compare=False)

    def __post_init__(self):
        if not self.theta.is_antisymmetric(tol=0.0):
            raise ValueError("theta must be antisymmetric")
        for t in (0.0, 1.0):
            nx = self.nabla_x_at(t)
            if not (nx.is_antisymmetric() and nx.is_degree0()):
                raise ValueError("nabla_x_at must produce antisymmetric degree-0 matrices")
            rt = self.curvature_at(t)
            if not rt.is_antisymmetric():
                raise ValueError("curvature_at must produce antisymmetric matrices")
            if not rt.degrees_present() <= {2}:
                raise ValueError("curvature_at must produce pure degree-2 matrices")
            self.theta._check(nx)
            self.theta._check(rt)

    @classmethod
    def from_endpoints(
        cls,
        theta: FormMatrix,
        nabla_x_0: FormMatrix,
        nabla_x_1: FormMatrix,
        curvature_at: Callable[[float], FormMatrix],
    ) -> "ConnectionFamily":
        """Linear interpolation of the endpoint Killing-derivative matrices."""
        for m in (nabla_x_0, nabla_x_1):
            if not (m.is_antisymmetric() and m.is_degree0()):
                raise ValueError("endpoint nabla_x matrices must be antisymmetric degree-0")

        def nabla_x_at(t: float) -> FormMatrix:
            return nabla_x_0 * (1.0 - t) + nabla_x_1 * t

        return cls(theta=theta, nabla_x_at=nabla_x_at, curvature_at=curvature_at)


def equivariant_curvature(curv: FormMatrix, nabla_x: FormMatrix) -> FormMatrix:
    """Equivariant curvature matrix: curvature minus the Killing-derivative term."""
    curv._check(nabla_x)
    if not nabla_x.is_degree0():
        raise ValueError("nabla_x must be purely degree 0")
    return curv - nabla_x


def l_form(rg: FormMatrix, order: int = DEFAULT_SERIES_ORDER) -> ExteriorForm:
    """Hirzebruch L-form of an (equivariant) curvature matrix.

    det^(1/2) of (x/2)/tanh(x/2) evaluated on the matrix, realized as
    exp(Tr[f(.)]) for f the half-log germ.
    """
    return exp_trace_germ(hirzebruch_l_log_germ(), rg, order)


def a_hat_form(rg: FormMatrix, order: int = DEFAULT_SERIES_ORDER) -> ExteriorForm:
    """A-hat form: det^(1/2) of (x/2)/sinh(x/2) evaluated on the matrix."""
    return exp_trace_germ(a_hat_log_germ(), rg, order)


@lru_cache(maxsize=None)
def _exp_neg_germ(n_coeffs: int = 40) -> AnalyticGerm:
    taylor = []
    fact = 1.0
    for k in range(n_coeffs):
        if k:
            fact *= k
        taylor.append((-1.0) ** k / fact)
    return AnalyticGerm(taylor=tuple(taylor), even=False, radius=np.inf, name="exp_neg")


def chern_form(
    fg: FormMatrix, grading: Sequence[int], order: int = DEFAULT_SERIES_ORDER
) -> ExteriorForm:
    """Supertrace of exp(-F) for a curvature matrix F and a +-1 grading."""
    if len(grading) != fg.size:
        raise DimensionMismatchError(
            f"grading length {len(grading)} != matrix size {fg.size}"
        )
    if any(g not in (-1, 1) for g in grading):
        raise ValueError("grading entries must be +-1")
    expm = apply_germ(_exp_neg_germ(), fg, order)
    acc = ExteriorForm.zero(fg.dimension)
    for i, g in enumerate(grading):
        acc = acc + expm.entry(i, i) * float(g)
    return acc


def _even_guard(germ: AnalyticGerm) -> None:
    if not germ.even:
        raise ValueError("this transgression formula requires an even germ")


def transgression(
    germ: AnalyticGerm,
    fam: ConnectionFamily,
    quad: QuadratureSpec = QuadratureSpec(),
    order: int = DEFAULT_SERIES_ORDER,
) -> ExteriorForm:
    """Transgression of exp(Tr[f(.)]) along the family, all geometric degrees.

    integrand(t) = exp(Tr[f(Rg_t)]) * Tr[Theta f'(Rg_t)]
    with Rg_t the equivariant curvature of the family at t.
    """
    d_germ = germ.derivative()

    def integrand(t: float) -> ExteriorForm:
        rg = equivariant_curvature(fam.curvature_at(t), fam.nabla_x_at(t))
        weight = exp_form(trace(apply_germ(germ, rg, order)))
        tr = trace(mat_mul(fam.theta, apply_germ(d_germ, rg, order)))
        return wedge(weight, tr)

    return quad.integrate_forms(integrand)


def transgression_degree3(
    germ: AnalyticGerm,
    fam: ConnectionFamily,
    quad: QuadratureSpec = QuadratureSpec(),
    order: int = DEFAULT_SERIES_ORDER,
) -> ExteriorForm:
    """Degree-3 component of the transgression, as the reduced integrand

    exp(Tr[f(NX)]) * ( Tr[Theta f'(NX)] * Tr[f'(NX) R] + Tr[(f2(NX)*Theta) R] )

    where NX = nabla^t X, R = R^t and f2(a)*b is the non-commutative second
    derivative.  Valid for even germs only.
    """
    _even_guard(germ)
    d_germ = germ.derivative()

    def integrand(t: float) -> ExteriorForm:
        nx = fam.nabla_x_at(t)
        rt = fam.curvature_at(t)
        f_nx = apply_germ(d_germ, nx, order)
        weight = exp_form(trace(apply_germ(germ, nx, order)))
        t1 = trace(mat_mul(fam.theta, f_nx))
        t2 = trace(mat_mul(f_nx, rt))
        t3 = trace(mat_mul(star_second(germ, nx, fam.theta, order), rt))
        return degree_component(wedge(weight, wedge(t1, t2) + t3), 3)

    return quad.integrate_forms(integrand)


def transgression_degree3_alt(
    germ: AnalyticGerm,
    fam: ConnectionFamily,
    quad: QuadratureSpec = QuadratureSpec(),
    order: int = DEFAULT_SERIES_ORDER,
) -> ExteriorForm:
    """Equivalent form of :func:`transgression_degree3`:

    degree-3 part of
    exp(Tr[f(NX)]) * (1 + Tr[Theta f'(NX)]) * Tr[f'(Theta + NX) R].
    """
    _even_guard(germ)
    d_germ = germ.derivative()

    def integrand(t: float) -> ExteriorForm:
        nx = fam.nabla_x_at(t)
        rt = fam.curvature_at(t)
        weight = exp_form(trace(apply_germ(germ, nx, order)))
        one_plus = ExteriorForm.scalar(weight.dimension, 1.0) + trace(
            mat_mul(fam.theta, apply_germ(d_germ, nx, order))
        )
        shifted = trace(mat_mul(apply_germ(d_germ, fam.theta + nx, order), rt))
        return degree_component(wedge(weight, wedge(one_plus, shifted)), 3)

    return quad.integrate_forms(integrand)


def product_transgression(
    t_beta1: ExteriorForm,
    beta2_at1: ExteriorForm,
    beta1_at0: ExteriorForm,
    t_beta2: ExteriorForm,
) -> ExteriorForm:
    """Transgression of a product of characteristic forms:

    T(beta1 beta2) = T(beta1) ^ beta2(1) + beta1(0) ^ T(beta2).
    """
    return wedge(t_beta1, beta2_at1) + wedge(beta1_at0, t_beta2)
