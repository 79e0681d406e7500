"""Curvature, connection and covariant operators of Regge metrics.

Thin wrapper around the compiled core; see the project README for the CLI
and configuration format.
"""

from _reggecurv import (  # noqa: F401
    AnalyticMetric,
    ConfigError,
    DofVector,
    Expr,
    ExprParseError,
    FeSpace,
    NumericalError,
    TriMesh,
    build_space,
    eval_scalar,
    eval_vector,
    l2_error_scalar,
    lift_connection,
    lift_curvature,
    ops_check,
    parse,
    perturb,
    regge_interpolate,
    run_study,
    structured_unit_square,
)

__all__ = [
    "AnalyticMetric",
    "ConfigError",
    "DofVector",
    "Expr",
    "ExprParseError",
    "FeSpace",
    "NumericalError",
    "TriMesh",
    "build_space",
    "eval_scalar",
    "eval_vector",
    "l2_error_scalar",
    "lift_connection",
    "lift_curvature",
    "ops_check",
    "parse",
    "perturb",
    "regge_interpolate",
    "run_study",
    "structured_unit_square",
]
