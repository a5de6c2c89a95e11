"""Curvature loci of surfaces in R^4 and of their corank 1 projections to R^3."""

__version__ = "0.1.0"

from ._numeric import ALL, TAU_DEG
from .expr import ExprSyntaxError, format_expr, parse_expression
from .fundforms import (
    MongeSurface4,
    NotImmersionError,
    NotMongeError,
    SecondFundamentalForm,
    adapted_sff,
    rotate_normal,
    rotate_tangent,
)
from .jet import DomainError, Jet2, jet2
from .loci import (
    EllipseKind,
    GOrbit,
    PointType,
    TangentDirection,
    analyze_point,
    asymptotic_directions_r4,
    binormal_directions_r4,
    classify_point_r4,
    curvature_ellipse,
    resultant,
)
from .projection import (
    MondOrbit,
    ParabolaKind,
    SingularPointType,
    asymptotic_directions_corank,
    binormal_directions_corank,
    classify_point_corank,
    corank_sff,
    curvature_parabola,
    mond_orbit,
    project,
)
from .verify import check_correspondence, fuzz_correspondence

__all__ = [
    "ALL", "TAU_DEG", "DomainError", "EllipseKind", "ExprSyntaxError", "GOrbit", "Jet2",
    "MondOrbit", "MongeSurface4", "NotImmersionError", "NotMongeError", "ParabolaKind",
    "PointType", "SecondFundamentalForm", "SingularPointType", "TangentDirection",
    "adapted_sff", "analyze_point", "asymptotic_directions_corank", "asymptotic_directions_r4",
    "binormal_directions_corank", "binormal_directions_r4", "check_correspondence",
    "classify_point_corank", "classify_point_r4", "corank_sff", "curvature_ellipse",
    "curvature_parabola", "format_expr", "fuzz_correspondence", "jet2", "mond_orbit",
    "parse_expression", "project", "resultant", "rotate_normal", "rotate_tangent",
]
