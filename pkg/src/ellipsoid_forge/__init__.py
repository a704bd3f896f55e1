"""Convex-body constructions and numerical checks of ellipsoid characterizations."""

from .bodies import (
    AffineImage,
    ConvexBody,
    Ellipsoid,
    PBall,
    Polytope,
    is_o_symmetric,
    line_boundary_points,
    load_body,
    o_symmetry_residual,
    parse_body,
    save_body,
    serialize_body,
)
from .cones import (
    CurveSample,
    SupportCone,
    cone_intersection,
    graze,
    is_ellipsoidal_cone,
    is_symmetric_cone,
    shadow_boundary,
    support_cone,
    write_curve_csv,
)
from .fitting import (
    ELLIPSE,
    HYPERBOLA,
    PARABOLA_OR_DEGENERATE,
    FitResult,
    fit_conic_2d,
    fit_hyperplane,
    fit_planar_conic,
    fit_quadric,
)
from .planar import (
    PlanarSection,
    RadonResult,
    SymmetryResult,
    affine_diameter_residual,
    birkhoff_normal,
    central_symmetry,
    conjugate_diameter,
    is_affine_diameter,
    is_radon_curve,
    section,
)
from .projective import (
    INFINITY_HYPERPLANE,
    HPoint,
    Hyperplane,
    Line,
    ProjectiveMap,
    AffineMap,
    Slab,
    cross_ratio,
    fit_hyperplane_projective,
    harmonic_conjugate,
)
from .theorems import (
    DEFAULT_TOLERANCES,
    SCHEMA,
    CheckReport,
    PoleResult,
    StageEntry,
    check_theorem1,
    check_theorem2,
    check_theorem3,
    check_theorem4,
    check_theorem_basico,
    check_theorem_radon,
    polar_of,
)

__version__ = "0.1.0"

__all__ = [
    "AffineImage",
    "AffineMap",
    "CheckReport",
    "ConvexBody",
    "CurveSample",
    "DEFAULT_TOLERANCES",
    "ELLIPSE",
    "Ellipsoid",
    "FitResult",
    "HPoint",
    "INFINITY_HYPERPLANE",
    "HYPERBOLA",
    "Hyperplane",
    "Line",
    "PARABOLA_OR_DEGENERATE",
    "PBall",
    "PlanarSection",
    "PoleResult",
    "Polytope",
    "ProjectiveMap",
    "RadonResult",
    "SCHEMA",
    "Slab",
    "StageEntry",
    "SupportCone",
    "SymmetryResult",
    "affine_diameter_residual",
    "birkhoff_normal",
    "central_symmetry",
    "check_theorem1",
    "check_theorem2",
    "check_theorem3",
    "check_theorem4",
    "check_theorem_basico",
    "check_theorem_radon",
    "cone_intersection",
    "conjugate_diameter",
    "cross_ratio",
    "fit_conic_2d",
    "fit_hyperplane",
    "fit_hyperplane_projective",
    "fit_planar_conic",
    "fit_quadric",
    "graze",
    "harmonic_conjugate",
    "is_affine_diameter",
    "is_ellipsoidal_cone",
    "is_o_symmetric",
    "is_radon_curve",
    "is_symmetric_cone",
    "line_boundary_points",
    "load_body",
    "o_symmetry_residual",
    "parse_body",
    "polar_of",
    "save_body",
    "section",
    "serialize_body",
    "shadow_boundary",
    "support_cone",
    "write_curve_csv",
]
