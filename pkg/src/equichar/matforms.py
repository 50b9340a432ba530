"""Matrix-valued exterior forms and the analytic functional calculus on them.

Provides the square matrices of forms that curvature and connection data live
in, power-series application of analytic germs to such matrices, the
non-commutative second-derivative pairing, and exp-of-trace characteristic
form evaluation.  Degree-0 matrices (rotation generators) get a fast numeric
path since every series here is dominated by them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import ConvergenceRadiusError, DimensionMismatchError
from .exterior import ExteriorForm, exp_form, wedge_tensor

__all__ = [
    "AnalyticGerm",
    "FormMatrix",
    "mat_mul",
    "mat_add",
    "mat_scale",
    "trace",
    "identity",
    "apply_germ",
    "star_second",
    "exp_trace_germ",
    "char_poly",
    "germ_tail_estimate",
    "spectral_radius_degree0",
    "hirzebruch_l_inner_germ",
    "hirzebruch_l_log_germ",
    "a_hat_inner_germ",
    "a_hat_log_germ",
    "DEFAULT_SERIES_ORDER",
]

DEFAULT_SERIES_ORDER = 16

# number of Taylor coefficients precomputed for the standard germs
_GERM_COEFFS = 44


# --------------------------------------------------------------------------- power series helpers

def _series_div(num: np.ndarray, den: np.ndarray) -> np.ndarray:
    """Coefficients of num/den as formal power series; den[0] must be nonzero."""
    n = len(num)
    out = np.zeros(n)
    out[0] = num[0] / den[0]
    for k in range(1, n):
        acc = num[k]
        for j in range(1, k + 1):
            acc -= den[j] * out[k - j] if j < len(den) else 0.0
        out[k] = acc / den[0]
    return out


def _series_log(series: np.ndarray) -> np.ndarray:
    """Coefficients of log(series); series[0] must be positive."""
    n = len(series)
    out = np.zeros(n)
    out[0] = math.log(series[0])
    for k in range(1, n):
        acc = k * series[k]
        for j in range(1, k):
            acc -= j * out[j] * series[k - j]
        out[k] = acc / (k * series[0])
    return out


def _horner(coeffs: Sequence[float], x: float) -> float:
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


# --------------------------------------------------------------------------- analytic germs

@dataclass(frozen=True)
class AnalyticGerm:
    """Even or general analytic germ at 0 with optional exact imaginary-axis evaluators.

    taylor[k] holds f^(k)(0)/k!.  For an even germ, ``eval_i(x)`` returns the
    real value f(ix), ``eval_i_d1(x)`` returns f'(ix)/i (the real number whose
    product rules reproduce products of the purely imaginary f'(ix)), and
    ``eval_i_d2(x)`` returns the real value f''(ix).
    """

    taylor: tuple
    even: bool
    radius: float
    name: str = ""
    eval_i: Optional[Callable[[float], float]] = field(default=None, compare=False)
    eval_i_d1: Optional[Callable[[float], float]] = field(default=None, compare=False)
    eval_i_d2: Optional[Callable[[float], float]] = field(default=None, compare=False)

    def __post_init__(self):
        if self.even and any(c != 0.0 for c in self.taylor[1::2]):
            raise ValueError("even germ must have vanishing odd Taylor coefficients")

    def coeff(self, k: int) -> float:
        return self.taylor[k] if k < len(self.taylor) else 0.0

    def derivative(self) -> "AnalyticGerm":
        """Germ of f', by coefficient shift; evaluators are not propagated."""
        shifted = tuple((k + 1) * c for k, c in enumerate(self.taylor[1:]))
        return AnalyticGerm(
            taylor=shifted,
            even=False,
            radius=self.radius,
            name=self.name + "'",
        )

    def second_derivative_at_zero(self) -> float:
        return 2.0 * self.coeff(2)


def germ_tail_estimate(germ: AnalyticGerm, rho: float, order: int) -> float:
    """Truncation-tail estimate |c_{K+1}| rho^{K+1} + |c_{K+2}| rho^{K+2}.

    Two consecutive coefficients are used because even germs have every other
    coefficient equal to zero.
    """
    tail = 0.0
    for k in (order + 1, order + 2):
        tail += abs(germ.coeff(k)) * rho**k
    return tail


def _even_series(half_coeffs: np.ndarray) -> np.ndarray:
    """Interleave coefficients in x^2 into a series in x (odd slots zero)."""
    out = np.zeros(2 * len(half_coeffs))
    out[::2] = half_coeffs
    return out


def _cosh_half_even(n: int) -> np.ndarray:
    # cosh(x/2) = sum (x/2)^{2k} / (2k)!   -- coefficients in x^2
    return np.array([0.25**k / math.factorial(2 * k) for k in range(n)])


def _sinhc_half_even(n: int) -> np.ndarray:
    # sinh(x/2)/(x/2) = sum (x/2)^{2k} / (2k+1)!   -- coefficients in x^2
    return np.array([0.25**k / math.factorial(2 * k + 1) for k in range(n)])


def _eval_even_series(half_coeffs: np.ndarray, x: float) -> float:
    return _horner(half_coeffs, x * x)


def _log_pair_evaluators(fbar, fbar_d1, fbar_d2):
    """Imaginary-axis evaluators of g = log(F)/2 from those of F(ix) =: Fbar.

    g(ix) = log(Fbar)/2, g'(ix)/i = -Fbar'/(2 Fbar), g''(ix) = -(Fbar''*Fbar - Fbar'^2)/(2 Fbar^2).
    """

    def eval_i(x: float) -> float:
        return 0.5 * math.log(fbar(x))

    def eval_i_d1(x: float) -> float:
        return -0.5 * fbar_d1(x) / fbar(x)

    def eval_i_d2(x: float) -> float:
        value = fbar(x)
        d1 = fbar_d1(x)
        return -0.5 * (fbar_d2(x) * value - d1 * d1) / (value * value)

    return eval_i, eval_i_d1, eval_i_d2


def _make_bar_evaluators(inner_even: np.ndarray):
    """Closed-form + series evaluators of Fbar(x) = F(ix) and two derivatives.

    F is an even germ with coefficients ``inner_even`` in x^2; Fbar alternates
    signs.  The series branch is used for |x| < 0.5 where the trigonometric
    closed forms lose digits to cancellation.
    """
    signs = np.array([(-1.0) ** k for k in range(len(inner_even))])
    bar = inner_even * signs                       # Fbar coefficients in x^2
    # d/dx sum b_k x^{2k} = sum 2k b_k x^{2k-1}  -> odd series, evaluate as x * S(x^2)
    bar_d1 = np.array([2 * k * bar[k] for k in range(1, len(bar))])
    bar_d2 = np.array([2 * k * (2 * k - 1) * bar[k] for k in range(1, len(bar))])
    return bar, bar_d1, bar_d2


def _bar_from_series(bar, bar_d1, bar_d2, closed, closed_d1, closed_d2, cutoff=0.5):
    """Plain x-derivative evaluators of Fbar, series-based inside |x| < cutoff."""

    def f(x: float) -> float:
        return _eval_even_series(bar, x) if abs(x) < cutoff else closed(x)

    def f1(x: float) -> float:
        return x * _eval_even_series(bar_d1, x) if abs(x) < cutoff else closed_d1(x)

    def f2(x: float) -> float:
        return _eval_even_series(bar_d2, x) if abs(x) < cutoff else closed_d2(x)

    return f, f1, f2


def _l_inner_series(n_coeffs: int) -> np.ndarray:
    # (x/2)/tanh(x/2) = cosh(x/2) / (sinh(x/2)/(x/2)),  coefficients in x^2
    half = (n_coeffs + 1) // 2 + 1
    return _series_div(_cosh_half_even(half), _sinhc_half_even(half))


def _l_bar_evaluators(inner: np.ndarray):
    """Fbar(x) = x/(2 tan(x/2)) and its two plain derivatives."""
    bar, bar_d1, bar_d2 = _make_bar_evaluators(inner)

    def closed(x):
        return 0.5 * x / math.tan(0.5 * x)

    def closed_d1(x):
        s = math.sin(0.5 * x)
        return 0.5 / math.tan(0.5 * x) - 0.25 * x / (s * s)

    def closed_d2(x):
        s = math.sin(0.5 * x)
        cot = 1.0 / math.tan(0.5 * x)
        return (-0.5 + 0.25 * x * cot) / (s * s)

    return _bar_from_series(bar, bar_d1, bar_d2, closed, closed_d1, closed_d2)


def _a_hat_inner_series(n_coeffs: int) -> np.ndarray:
    # (x/2)/sinh(x/2),  coefficients in x^2
    half = (n_coeffs + 1) // 2 + 1
    one = np.zeros(half)
    one[0] = 1.0
    return _series_div(one, _sinhc_half_even(half))


def _a_hat_bar_evaluators(inner: np.ndarray):
    """Fbar(x) = (x/2)/sin(x/2) and its two plain derivatives."""
    bar, bar_d1, bar_d2 = _make_bar_evaluators(inner)

    def closed(x):
        return 0.5 * x / math.sin(0.5 * x)

    def closed_d1(x):
        s = math.sin(0.5 * x)
        return (0.5 * s - 0.25 * x * math.cos(0.5 * x)) / (s * s)

    def closed_d2(x):
        s = math.sin(0.5 * x)
        c = math.cos(0.5 * x)
        return (-0.5 * c * s + 0.125 * x * (c * c + 1.0)) / (s * s * s)

    return _bar_from_series(bar, bar_d1, bar_d2, closed, closed_d1, closed_d2)


def _inner_germ(inner, bar_evals, n_coeffs, radius, name) -> AnalyticGerm:
    # for an even germ F, F'(ix)/i = -Fbar'(x) and F''(ix) = -Fbar''(x)
    f, f1, f2 = bar_evals

    return AnalyticGerm(
        taylor=tuple(_even_series(inner)[:n_coeffs]),
        even=True,
        radius=radius,
        name=name,
        eval_i=f,
        eval_i_d1=lambda x: -f1(x),
        eval_i_d2=lambda x: -f2(x),
    )


def _log_germ(inner, bar_evals, n_coeffs, radius, name) -> AnalyticGerm:
    log_half = 0.5 * _series_log(inner)
    e0, e1, e2 = _log_pair_evaluators(*bar_evals)
    return AnalyticGerm(
        taylor=tuple(_even_series(log_half)[:n_coeffs]),
        even=True,
        radius=radius,
        name=name,
        eval_i=e0,
        eval_i_d1=e1,
        eval_i_d2=e2,
    )


def hirzebruch_l_inner_germ(n_coeffs: int = _GERM_COEFFS) -> AnalyticGerm:
    """Germ of (x/2)/tanh(x/2); restricted to the imaginary axis it is x/(2 tan(x/2))."""
    inner = _l_inner_series(n_coeffs)
    return _inner_germ(inner, _l_bar_evaluators(inner), n_coeffs, 2.0 * math.pi, "l_inner")


def hirzebruch_l_log_germ(n_coeffs: int = _GERM_COEFFS) -> AnalyticGerm:
    """Germ of log((x/2)/tanh(x/2))/2; the exp-of-trace kernel of the L-form."""
    inner = _l_inner_series(n_coeffs)
    return _log_germ(inner, _l_bar_evaluators(inner), n_coeffs, math.pi, "l_log")


def a_hat_inner_germ(n_coeffs: int = _GERM_COEFFS) -> AnalyticGerm:
    """Germ of (x/2)/sinh(x/2); on the imaginary axis (x/2)/sin(x/2)."""
    inner = _a_hat_inner_series(n_coeffs)
    return _inner_germ(inner, _a_hat_bar_evaluators(inner), n_coeffs, 2.0 * math.pi, "a_hat_inner")


def a_hat_log_germ(n_coeffs: int = _GERM_COEFFS) -> AnalyticGerm:
    """Germ of log((x/2)/sinh(x/2))/2; the exp-of-trace kernel of the A-hat form."""
    inner = _a_hat_inner_series(n_coeffs)
    return _log_germ(inner, _a_hat_bar_evaluators(inner), n_coeffs, 2.0 * math.pi, "a_hat_log")


# --------------------------------------------------------------------------- matrices of forms

class FormMatrix:
    """Square matrix of exterior forms over one common coframe dimension.

    The matrix size (rows) is independent of the coframe dimension: boundary
    data is 4x4 over a 3-dimensional coframe.  Stored as an immutable
    ``(size, size, 2**dim)`` array.
    """

    __slots__ = ("size", "dimension", "data")

    def __init__(self, size: int, dimension: int, data: Optional[np.ndarray] = None):
        dim_size = 1 << dimension
        if data is None:
            data = np.zeros((size, size, dim_size))
        else:
            data = np.asarray(data, dtype=np.float64)
            if data.shape != (size, size, dim_size):
                raise ValueError(f"expected shape {(size, size, dim_size)}, got {data.shape}")
            data = data.copy()
        data.setflags(write=False)
        self.size = size
        self.dimension = dimension
        self.data = data

    @classmethod
    def from_entries(cls, entries: Sequence[Sequence[ExteriorForm]]) -> "FormMatrix":
        size = len(entries)
        dim = None
        for row in entries:
            if len(row) != size:
                raise ValueError("entries must form a square matrix")
            for e in row:
                if isinstance(e, ExteriorForm):
                    dim = e.dimension
        if dim is None:
            raise ValueError("at least one entry must be an ExteriorForm")
        data = np.zeros((size, size, 1 << dim))
        for i, row in enumerate(entries):
            for j, e in enumerate(row):
                if isinstance(e, ExteriorForm):
                    if e.dimension != dim:
                        raise DimensionMismatchError("mixed coframe dimensions in matrix")
                    data[i, j] = e.coeffs
                else:
                    data[i, j, 0] = float(e)
        return cls(size, dim, data)

    @classmethod
    def from_scalar_matrix(cls, mat: np.ndarray, dimension: int) -> "FormMatrix":
        mat = np.asarray(mat, dtype=np.float64)
        size = mat.shape[0]
        data = np.zeros((size, size, 1 << dimension))
        data[:, :, 0] = mat
        return cls(size, dimension, data)

    def entry(self, i: int, j: int) -> ExteriorForm:
        return ExteriorForm(self.dimension, self.data[i, j])

    def degree0(self) -> np.ndarray:
        """The degree-0 (scalar) part as a plain numeric matrix."""
        return self.data[:, :, 0].copy()

    def is_degree0(self) -> bool:
        return not np.any(self.data[:, :, 1:])

    def is_antisymmetric(self, tol: float = 0.0) -> bool:
        return bool(np.max(np.abs(self.data + self.data.transpose(1, 0, 2))) <= tol)

    def degrees_present(self) -> set:
        from .exterior import _degree_masks  # local import to keep the public surface tidy

        deg = _degree_masks(self.dimension)
        present = set()
        nz = np.any(self.data != 0.0, axis=(0, 1))
        for mask, flag in enumerate(nz):
            if flag:
                present.add(int(deg[mask]))
        return present

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.data)))

    def transpose(self) -> "FormMatrix":
        return FormMatrix(self.size, self.dimension, self.data.transpose(1, 0, 2))

    def __add__(self, other: "FormMatrix") -> "FormMatrix":
        self._check(other)
        return FormMatrix(self.size, self.dimension, self.data + other.data)

    def __sub__(self, other: "FormMatrix") -> "FormMatrix":
        self._check(other)
        return FormMatrix(self.size, self.dimension, self.data - other.data)

    def __neg__(self) -> "FormMatrix":
        return FormMatrix(self.size, self.dimension, -self.data)

    def __mul__(self, scalar: float) -> "FormMatrix":
        return FormMatrix(self.size, self.dimension, self.data * float(scalar))

    __rmul__ = __mul__

    def _check(self, other: "FormMatrix") -> None:
        if self.size != other.size:
            raise DimensionMismatchError(f"matrix sizes differ: {self.size} vs {other.size}")
        if self.dimension != other.dimension:
            raise DimensionMismatchError(
                f"coframe dimensions differ: {self.dimension} vs {other.dimension}"
            )

    def __repr__(self) -> str:
        return f"FormMatrix(size={self.size}, coframe_dim={self.dimension})"


def identity(size: int, dimension: int) -> FormMatrix:
    return FormMatrix.from_scalar_matrix(np.eye(size), dimension)


def mat_add(a: FormMatrix, b: FormMatrix) -> FormMatrix:
    return a + b


def mat_scale(a: FormMatrix, scalar: float) -> FormMatrix:
    return a * scalar


def mat_mul(a: FormMatrix, b: FormMatrix) -> FormMatrix:
    """Matrix product with entries combined by wedge: (AB)_ik = sum_j A_ij ^ B_jk."""
    a._check(b)
    # fast paths when one factor is purely scalar (degree 0)
    if a.is_degree0():
        data = np.einsum("ij,jkc->ikc", a.data[:, :, 0], b.data)
        return FormMatrix(a.size, a.dimension, data)
    if b.is_degree0():
        data = np.einsum("ijc,jk->ikc", a.data, b.data[:, :, 0])
        return FormMatrix(a.size, a.dimension, data)
    tensor = wedge_tensor(a.dimension)
    data = np.einsum("ija,jkb,abc->ikc", a.data, b.data, tensor)
    return FormMatrix(a.size, a.dimension, data)


def trace(a: FormMatrix) -> ExteriorForm:
    """Sum of diagonal entries."""
    return ExteriorForm(a.dimension, np.einsum("iic->c", a.data))


def spectral_radius_degree0(mat: np.ndarray) -> float:
    """Spectral radius of a small numeric matrix.

    Antisymmetric 2x2/3x3/4x4 matrices (the rotation generators arising here)
    are handled by closed formulas; anything else falls back to the Frobenius
    norm, a safe upper bound.
    """
    mat = np.asarray(mat, dtype=np.float64)
    n = mat.shape[0]
    if np.allclose(mat, -mat.T, atol=1e-14 * (1.0 + np.max(np.abs(mat)))):
        if n == 2:
            return abs(mat[0, 1])
        if n == 3:
            return math.sqrt(mat[0, 1] ** 2 + mat[0, 2] ** 2 + mat[1, 2] ** 2)
        if n == 4:
            p = float(np.sum(mat * mat)) / 2.0  # lam1^2 + lam2^2
            pf = (
                mat[0, 1] * mat[2, 3]
                - mat[0, 2] * mat[1, 3]
                + mat[0, 3] * mat[1, 2]
            )
            q = pf * pf  # lam1^2 * lam2^2
            disc = max(p * p - 4.0 * q, 0.0)
            return math.sqrt((p + math.sqrt(disc)) / 2.0)
    return float(np.linalg.norm(mat, "fro"))


def _check_radius(germ: AnalyticGerm, m: FormMatrix) -> float:
    rho = spectral_radius_degree0(m.data[:, :, 0])
    if rho >= germ.radius:
        raise ConvergenceRadiusError(rho, germ.radius, germ.name)
    return rho


def apply_germ(germ: AnalyticGerm, m: FormMatrix, order: int = DEFAULT_SERIES_ORDER) -> FormMatrix:
    """sum_{k<=order} c_k M^k with geometric degree > n discarded automatically.

    Raises ConvergenceRadiusError when the degree-0 part of M has spectral
    radius outside the germ's disk of convergence; the truncation tail for the
    accepted radius is available via :func:`germ_tail_estimate`.
    """
    _check_radius(germ, m)
    acc = identity(m.size, m.dimension) * germ.coeff(0)
    power = identity(m.size, m.dimension)
    for k in range(1, order + 1):
        power = mat_mul(power, m)
        c = germ.coeff(k)
        if c != 0.0:
            acc = acc + power * c
    return acc


def star_second(
    germ: AnalyticGerm,
    a: FormMatrix,
    b: FormMatrix,
    order: int = DEFAULT_SERIES_ORDER,
) -> FormMatrix:
    """Non-commutative second derivative sum_n f^(n+1)(0)/n! * sum_q a^q b a^(n-1-q).

    ``a`` must be purely degree 0; ``b`` may carry forms of any degree.  For an
    even germ the result is insensitive to the sign of ``a``.
    """
    a._check(b)
    if not a.is_degree0():
        raise ValueError("star_second requires a purely degree-0 first argument")
    _check_radius(germ, a)
    a0 = a.data[:, :, 0]
    # powers of the numeric part, a^0 .. a^(order-1)
    powers = [np.eye(a.size)]
    for _ in range(order - 1):
        powers.append(powers[-1] @ a0)
    out = np.zeros_like(b.data)
    for n in range(1, order + 1):
        c = germ.coeff(n + 1) * (n + 1)  # f^(n+1)(0)/n!
        if c == 0.0:
            continue
        h_n = np.zeros_like(b.data)
        for q in range(n):
            h_n += np.einsum("ij,jkc,kl->ilc", powers[q], b.data, powers[n - 1 - q])
        out += c * h_n
    return FormMatrix(b.size, b.dimension, out)


def exp_trace_germ(
    germ: AnalyticGerm, m: FormMatrix, order: int = DEFAULT_SERIES_ORDER
) -> ExteriorForm:
    """exp(Tr[f(M)]): the det^(1/2)-style characteristic form built from f.

    The outer exponential is expanded exactly up to the coframe dimension.
    """
    return exp_form(trace(apply_germ(germ, m, order)))


def char_poly(m: FormMatrix) -> list:
    """Characteristic polynomial coefficients [1, c_1, .., c_size] of a matrix
    whose entries all have even exterior degree (so they commute), with
    det(lambda I - M) = sum_k c_k lambda^(size - k).

    Faddeev-LeVerrier recursion; valid over any commutative coefficient ring.
    """
    from .exterior import _degree_masks

    deg = _degree_masks(m.dimension)
    odd = [mask for mask in range(1 << m.dimension) if deg[mask] % 2]
    if np.any(m.data[:, :, odd]):
        raise ValueError("char_poly needs entries of even exterior degree")
    coeffs = [ExteriorForm.scalar(m.dimension, 1.0)]
    aux = identity(m.size, m.dimension)
    for k in range(1, m.size + 1):
        aux = mat_mul(m, aux)
        c_k = trace(aux) * (-1.0 / k)
        coeffs.append(c_k)
        data = aux.data.copy()
        for i in range(m.size):
            data[i, i] += c_k.coeffs
        aux = FormMatrix(m.size, m.dimension, data)
    return coeffs
