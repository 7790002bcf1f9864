from .surface import (
    BoundaryLabel,
    SurfaceKind,
    SurfaceSpec,
    annulus,
    circle,
    disk,
    half_circle,
    half_disk,
    make_surface,
)
from .metric import (
    FLAT,
    ConformalFactor,
    ConstantFactor,
    FlatFactor,
    FunctionFactor,
    HarmonicPolynomialFactor,
    HemisphereFactor,
    RadialBumpFactor,
    SumFactor,
    make_factor,
)
from .curves import Arc, Curve, Segment, point_segment_distance, segments_intersect, wrap_angle
from .quadrature import BoundaryPiece, boundary_grid, bulk_grid, gauss_legendre, graded_gauss_legendre, periodic_nodes
from .curvature import (
    CurvatureSample,
    boundary_curvature_density,
    boundary_frame,
    curvature_fields,
    curve_curvature_integral,
    gauss_bonnet_defect,
    geodesic_curvature,
    scalar_curvature,
)

__all__ = [
    "BoundaryLabel",
    "SurfaceKind",
    "SurfaceSpec",
    "annulus",
    "circle",
    "disk",
    "half_circle",
    "half_disk",
    "make_surface",
    "FLAT",
    "ConformalFactor",
    "ConstantFactor",
    "FlatFactor",
    "FunctionFactor",
    "HarmonicPolynomialFactor",
    "HemisphereFactor",
    "RadialBumpFactor",
    "SumFactor",
    "make_factor",
    "Arc",
    "Curve",
    "Segment",
    "point_segment_distance",
    "segments_intersect",
    "wrap_angle",
    "BoundaryPiece",
    "boundary_grid",
    "bulk_grid",
    "gauss_legendre",
    "graded_gauss_legendre",
    "periodic_nodes",
    "CurvatureSample",
    "boundary_curvature_density",
    "boundary_frame",
    "curvature_fields",
    "curve_curvature_integral",
    "gauss_bonnet_defect",
    "geodesic_curvature",
    "scalar_curvature",
]
