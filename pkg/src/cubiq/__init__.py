"""Cubic equations solved from their critical points.

The quadratic formula locates the two critical points of a cubic; at least
one of them sits strictly inside the Voronoi cell of a root, and the basic
sequence B_m seeded there converges to that root. This package implements
that solver, the Voronoi-cell geometry and its verification sweeps, and an
escape-time renderer for the Newton/Halley/basic-sequence basins.
"""

from .basic_family import (
    BasicSequenceState,
    BoundaryTieError,
    ConvergenceReport,
    StopReason,
    basic_sequence,
    d_step_cubic,
    fixed_point_member,
    general_D,
    rate_ratio,
)
from .cubic_solver import (
    FirstRootSource,
    NoConvergenceError,
    SolveReport,
    polish,
    solve,
)
from .poly_core import (
    Deflation,
    Polynomial,
    QuadraticRoots,
    RepeatedCriticalPointError,
    cardano_oracle,
    complex_sqrt_decomposed,
    critical_points,
    deflate,
    derivatives_up_to,
    evaluate,
    format_complex,
    format_polynomial,
    parse_complex,
    parse_polynomial,
    solve_quadratic,
)
from .polynomiograph import (
    DEFAULT_PALETTE,
    Polynomiograph,
    RenderConfig,
    RenderMethod,
    encode_image,
    measure_divergence_fraction,
    pixel_centers,
    pixel_index,
    render,
)
from .voronoi import (
    CanonicalCubic,
    CanonicalTransform,
    CollinearRootsError,
    Theorem2Case,
    VoronoiVerdict,
    canonical_from_w,
    canonicalize,
    classify,
    gauss_lucas_check,
    nearest_root,
    theorem2_distance_gap,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # poly_core
    "Polynomial",
    "QuadraticRoots",
    "Deflation",
    "RepeatedCriticalPointError",
    "evaluate",
    "derivatives_up_to",
    "solve_quadratic",
    "critical_points",
    "complex_sqrt_decomposed",
    "deflate",
    "cardano_oracle",
    "parse_complex",
    "format_complex",
    "parse_polynomial",
    "format_polynomial",
    # basic_family
    "BasicSequenceState",
    "ConvergenceReport",
    "StopReason",
    "BoundaryTieError",
    "d_step_cubic",
    "general_D",
    "basic_sequence",
    "fixed_point_member",
    "rate_ratio",
    # voronoi
    "CanonicalCubic",
    "CanonicalTransform",
    "CollinearRootsError",
    "Theorem2Case",
    "VoronoiVerdict",
    "nearest_root",
    "canonicalize",
    "canonical_from_w",
    "classify",
    "gauss_lucas_check",
    "theorem2_distance_gap",
    # polynomiograph
    "RenderConfig",
    "RenderMethod",
    "Polynomiograph",
    "DEFAULT_PALETTE",
    "pixel_centers",
    "pixel_index",
    "render",
    "measure_divergence_fraction",
    "encode_image",
    # cubic_solver
    "SolveReport",
    "FirstRootSource",
    "NoConvergenceError",
    "solve",
    "polish",
]
