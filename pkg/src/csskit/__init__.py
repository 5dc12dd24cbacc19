"""Conformally separable space-times with pure radiation sources.

Seven metric families in privileged coordinates, each with the closed-form
radiation solutions it admits, plus numerical oracles (finite-difference
conservation, geodesic transport, eikonal) that check the formulas without
trusting them.
"""

from .cases import CaseInfo, CssType, all_cases, case_info
from .errors import (
    ConfigError,
    CssError,
    DomainError,
    EvalError,
    ExprSyntaxError,
    GenerationFailure,
    QuadratureNonConvergence,
    SingularMatrix,
    UnknownIdentifier,
)
from .expressions import Expr, ScalarFn1D, ScalarFn4D, compile_expr, differentiate, parse_expr
from .generate import make_random_model
from .models import (
    CssModel,
    MetricAtPoint,
    StackelPotentials,
    Violation,
    build_metric,
    stackel_potentials,
    v_potentials_3,
    v_potentials_4,
    validate_constraints,
)
from .numerics import (
    CumulativeIntegral,
    Mat4Sym,
    QuadratureSpec,
    central_diff,
    cumulative_integral,
    invert_sym4,
    rk4_step,
)
from .radiation import (
    RadiationAtPoint,
    energy_density,
    invariants,
    radiation_at,
    solution,
    stress_energy,
    wave_covector,
)
from .verify import (
    CheckResult,
    GeodesicTrajectory,
    ResidualReport,
    christoffel,
    divergence_residual,
    eikonal_residual,
    geodesic_residual,
    integrate_null_geodesic,
    scan,
)

__version__ = "1.0.0"

__all__ = [
    "__version__",
    "CaseInfo",
    "CssType",
    "all_cases",
    "case_info",
    "CssError",
    "ConfigError",
    "DomainError",
    "EvalError",
    "ExprSyntaxError",
    "GenerationFailure",
    "QuadratureNonConvergence",
    "SingularMatrix",
    "UnknownIdentifier",
    "Expr",
    "ScalarFn1D",
    "ScalarFn4D",
    "compile_expr",
    "differentiate",
    "parse_expr",
    "make_random_model",
    "CssModel",
    "MetricAtPoint",
    "StackelPotentials",
    "Violation",
    "build_metric",
    "stackel_potentials",
    "v_potentials_3",
    "v_potentials_4",
    "validate_constraints",
    "CumulativeIntegral",
    "Mat4Sym",
    "QuadratureSpec",
    "central_diff",
    "cumulative_integral",
    "invert_sym4",
    "rk4_step",
    "RadiationAtPoint",
    "energy_density",
    "invariants",
    "radiation_at",
    "solution",
    "stress_energy",
    "wave_covector",
    "CheckResult",
    "GeodesicTrajectory",
    "ResidualReport",
    "christoffel",
    "divergence_residual",
    "eikonal_residual",
    "geodesic_residual",
    "integrate_null_geodesic",
    "scan",
]
