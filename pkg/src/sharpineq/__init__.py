"""Sharp constants and numerical verification of Hardy, CKN and Rellich inequalities."""

__version__ = "0.1.0"

from .constants import (
    SharpConstant,
    ckn_edge_equal_constant,
    ckn_edge_plus1_constant,
    ckn_interpolated_constant,
    gamma,
    hardy_sharp_constant,
    rellich_sharp_constant,
    sharp_constant,
    sobolev_sharp_constant,
    talenti_constant,
    unit_sphere_area,
)
from .core import InequalityCase, InterpolationExponents, Variant, interpolation_exponents, make_case, theta_from_b
from .exceptions import (
    DomainError,
    IntegrabilityError,
    NoFeasiblePoint,
    NonConvergence,
    NonFinite,
    RatioExceedsOne,
    ToleranceNotMet,
)
from .optimize import crosscheck_closed_forms, make_objective, minimize_bivariate, minimize_scalar
from .quadrature import McSpec, QuadratureSpec, integrate, monte_carlo_weighted
from .radial import RadialProfile, functional_sides, mollifier, near_extremal, profile_eval, radial_laplacian
from .verify import holder_split_check, sweep, verify_case, young_pointwise_check
