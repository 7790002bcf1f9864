from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from ..errors import DomainError, GeometryError, QuadratureError, UnsupportedSurface
from ..logs import get_logger
from .curves import Curve
from .metric import ConformalFactor
from .quadrature import boundary_grid, bulk_grid
from .surface import BOUNDARY_TOL, SurfaceKind, SurfaceSpec

ON_BOUNDARY_TOL = 1e-9


class CurvatureSample(NamedTuple):
    K: float
    k: float | None


def scalar_curvature(rho: ConformalFactor, z: np.ndarray) -> np.ndarray:
    """K of e^rho |dz|^2, i.e. -e^{-rho} (flat Laplacian of rho)."""
    return -np.exp(-rho.value(z)) * rho.laplacian(z)


def boundary_frame(surface: SurfaceSpec, z: complex) -> tuple[complex, float]:
    """Outward unit normal and flat geodesic curvature at a boundary point."""
    r = abs(z)
    match surface.kind:
        case SurfaceKind.DISK:
            if abs(r - 1.0) <= ON_BOUNDARY_TOL:
                return z / r, 1.0
        case SurfaceKind.ANNULUS:
            if abs(r - 1.0) <= ON_BOUNDARY_TOL:
                return z / r, 1.0
            if abs(r - surface.inner_radius) <= ON_BOUNDARY_TOL:
                return -z / r, -1.0 / surface.inner_radius
        case SurfaceKind.HALF_DISK:
            on_arc = abs(r - 1.0) <= ON_BOUNDARY_TOL and z.imag >= -ON_BOUNDARY_TOL
            on_segment = abs(z.imag) <= ON_BOUNDARY_TOL and abs(z.real) <= 1.0 + ON_BOUNDARY_TOL
            if on_arc and on_segment:
                raise GeometryError(f"{z} is a corner; geodesic curvature is concentrated there")
            if on_arc:
                return z / r, 1.0
            if on_segment:
                return -1j, 0.0
        case _:
            raise UnsupportedSurface(f"curvature fields are not defined on a {surface.kind.value}")
    raise DomainError(f"{z} is not on the boundary of the {surface.kind.value}")


def geodesic_curvature(surface: SurfaceSpec, rho: ConformalFactor, z: complex) -> float:
    """k of e^rho |dz|^2 at a boundary point: e^{-rho/2}(k_flat + d_nu rho / 2), nu outward."""
    nu, k_flat = boundary_frame(surface, z)
    zz = np.array([z])
    dnu = rho.directional(zz, np.array([nu]))[0]
    return float(math.exp(-rho.value(zz)[0] / 2.0) * (k_flat + 0.5 * dnu))


def curvature_fields(surface: SurfaceSpec, rho: ConformalFactor, point: complex, boundary: bool = False) -> CurvatureSample:
    """Scalar curvature at a point and, on the boundary, the geodesic curvature.

    Raises:
        DomainError: if the point is off the surface, or not on the boundary
            when ``boundary`` is set.
    """
    if not surface.is_two_dimensional:
        raise UnsupportedSurface(f"curvature fields are not defined on a {surface.kind.value}")
    point = complex(point)
    if not surface.contains(point, tol=ON_BOUNDARY_TOL):
        raise DomainError(f"{point} is not on the {surface.kind.value}")
    K = float(scalar_curvature(rho, np.array([point]))[0])
    if not boundary:
        return CurvatureSample(K, None)
    return CurvatureSample(K, geodesic_curvature(surface, rho, point))


def boundary_curvature_density(surface: SurfaceSpec, rho: ConformalFactor, n: int):
    """Boundary quadrature with k_g dl_g expressed against flat arc length."""
    out = []
    for piece in boundary_grid(surface, n):
        dnu = rho.directional(piece.points, piece.normals)
        out.append((piece, piece.k_flat + 0.5 * dnu))
    return out


def curve_curvature_integral(curve: Curve, rho: ConformalFactor, n_per_piece: int = 32) -> float:
    """Integral of the signed geodesic curvature of ``curve`` in e^rho |dz|^2.

    Kinks contribute their turning angle; the metric adds -1/2 of the flux of
    rho through the left normal.
    """
    total = curve.turning()
    if not rho.is_flat:
        pts, w, normals = curve.nodes(n_per_piece)
        total -= 0.5 * float(np.sum(w * rho.directional(pts, normals)))
    return total


def gauss_bonnet_defect(surface: SurfaceSpec, rho: ConformalFactor, quad_order: int) -> float:
    """1/2 int K dv + int k dl + corner turning - 2 pi chi for the metric e^rho |dz|^2.

    Raises:
        QuadratureError: on non-finite curvature values.
    """
    if quad_order < 4:
        raise DomainError(f"quad_order must be at least 4, got {quad_order}")
    if not surface.is_two_dimensional:
        raise UnsupportedSurface(f"Gauss-Bonnet needs a two-dimensional surface, got {surface.kind.value}")
    pts, w = bulk_grid(surface, quad_order, 2 * quad_order)
    # K dv = -(flat Laplacian of rho) dx
    bulk_density = -rho.laplacian(pts)
    if not np.all(np.isfinite(bulk_density)):
        raise QuadratureError("non-finite scalar curvature at a bulk node")
    bulk = 0.5 * float(np.sum(w * bulk_density))
    edge = 0.0
    for piece, density in boundary_curvature_density(surface, rho, 2 * quad_order):
        if not np.all(np.isfinite(density)):
            raise QuadratureError(f"non-finite geodesic curvature on the {piece.name} boundary")
        edge += float(np.sum(piece.weights * density))
    defect = bulk + edge + surface.corner_turning - 2.0 * math.pi * surface.euler_char
    get_logger().debug(
        "Gauss-Bonnet audit",
        {"surface": surface.kind.value, "order": quad_order, "bulk": bulk, "edge": edge, "defect": defect},
    )
    return defect


__all__ = [
    "BOUNDARY_TOL",
    "CurvatureSample",
    "scalar_curvature",
    "boundary_frame",
    "geodesic_curvature",
    "curvature_fields",
    "boundary_curvature_density",
    "curve_curvature_integral",
    "gauss_bonnet_defect",
]
