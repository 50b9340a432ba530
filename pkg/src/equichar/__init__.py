"""equichar: equivariant characteristic forms, transgressions and eta invariants
for four-dimensional SKR geometries."""

from .errors import (
    ConfigError,
    ConvergenceRadiusError,
    DimensionMismatchError,
    EquicharError,
    ProfileError,
    SingularInputError,
)
from .exterior import ExteriorForm, MultiIndex, degree_component, exp_form, linear_combine, wedge
from .matforms import (
    AnalyticGerm,
    FormMatrix,
    a_hat_inner_germ,
    a_hat_log_germ,
    apply_germ,
    exp_trace_germ,
    hirzebruch_l_inner_germ,
    hirzebruch_l_log_germ,
    mat_mul,
    star_second,
    trace,
)
from .charforms import (
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
from .skr import SKRProfile

__version__ = "0.1.0"
