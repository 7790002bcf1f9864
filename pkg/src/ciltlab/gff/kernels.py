"""Covariance kernels of the free fields on the unit disk and circle.

All kernels are normalized as 2 pi G, so the Neumann disk kernel is
-log|x - y| - log|1 - x conj(y)| and the diagonal blows up like -log eps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..errors import DomainError, GeometryError, SingularityError

SINGULAR_TOL = 1e-14
OVERLAP_NODES = 256


class KernelKind(Enum):
    CIRCLE_GFF = "circle_gff"
    HALF_CIRCLE_GFF = "half_circle_gff"
    NEUMANN_DISK = "neumann_disk"
    DIRICHLET_DISK = "dirichlet_disk"


def _log_abs(z) -> np.ndarray:
    return np.log(np.abs(z))


@dataclass(frozen=True)
class CovarianceKernel:
    kind: KernelKind

    @property
    def on_circle(self) -> bool:
        return self.kind in (KernelKind.CIRCLE_GFF, KernelKind.HALF_CIRCLE_GFF)

    def check_point(self, x: complex) -> None:
        r = abs(x)
        match self.kind:
            case KernelKind.CIRCLE_GFF:
                ok = abs(r - 1.0) < 1e-12
            case KernelKind.HALF_CIRCLE_GFF:
                ok = abs(r - 1.0) < 1e-12 and x.imag >= -1e-12
            case KernelKind.NEUMANN_DISK:
                ok = r <= 1.0 + 1e-12
            case KernelKind.DIRICHLET_DISK:
                ok = r < 1.0
        if not ok:
            raise DomainError(f"{x} is not a valid site for the {self.kind.value} kernel")

    def evaluate(self, x: complex, y: complex) -> float:
        """Unregularized covariance C(x, y).

        Raises:
            SingularityError: at x = y.
        """
        x, y = complex(x), complex(y)
        self.check_point(x)
        self.check_point(y)
        if abs(x - y) < SINGULAR_TOL:
            raise SingularityError(f"{self.kind.value} kernel is singular at x = y = {x}")
        return float(self._pair(np.asarray(x), np.asarray(y)))

    def _pair(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        near = -_log_abs(x - y)
        match self.kind:
            case KernelKind.CIRCLE_GFF:
                return near
            case KernelKind.HALF_CIRCLE_GFF:
                return near - _log_abs(x - np.conj(y))
            case KernelKind.NEUMANN_DISK:
                return near - _log_abs(1.0 - x * np.conj(y))
            case KernelKind.DIRICHLET_DISK:
                return near + _log_abs(1.0 - x * np.conj(y))

    def counterterm(self, x: complex) -> float:
        """W(x) = lim C_eps(x, x) + log eps."""
        x = complex(x)
        self.check_point(x)
        match self.kind:
            case KernelKind.NEUMANN_DISK:
                if abs(x) >= 1.0 - 1e-12:
                    return 0.0
                return -math.log(1.0 - abs(x) ** 2)
            case KernelKind.DIRICHLET_DISK:
                return math.log(1.0 - abs(x) ** 2)
            case KernelKind.HALF_CIRCLE_GFF:
                if abs(x.imag) < 1e-12:
                    raise SingularityError(f"the half-circle counterterm is singular at the endpoint {x}")
                return -math.log(abs(x - x.conjugate()))
        return 0.0


def make_kernel(kind: str | KernelKind) -> CovarianceKernel:
    try:
        return CovarianceKernel(kind if isinstance(kind, KernelKind) else KernelKind(kind))
    except ValueError:
        raise DomainError(f"unknown kernel kind {kind!r}") from None


def green_kernel(kind: str | KernelKind, x: complex, y: complex) -> float:
    """Green function G = C / (2 pi)."""
    return make_kernel(kind).evaluate(x, y) / (2.0 * math.pi)


def boundary_smoothing_radius(eps: float) -> float:
    """Radius of the Poisson smoothing circle used for boundary sites at scale ``eps``."""
    return math.sqrt(1.0 - eps)


def _is_boundary(kernel: CovarianceKernel, x: complex) -> bool:
    return kernel.on_circle or (kernel.kind is KernelKind.NEUMANN_DISK and abs(abs(x) - 1.0) < 1e-12)


def _circle_average_near(x: complex, ex: float, y: complex, ey: float) -> float:
    """Average of -log|u - v| over u on the circle (x, ex) and v on the circle (y, ey)."""
    d = abs(x - y)
    if ex == 0.0 and ey == 0.0:
        return -math.log(d)
    if ex == 0.0 or ey == 0.0:
        return -math.log(max(d, ex + ey))
    if d >= ex + ey:
        return -math.log(d)
    # average over one circle of the exact inner average -log max(|u - y|, ey)
    t = 2.0 * np.pi * (np.arange(OVERLAP_NODES) + 0.5) / OVERLAP_NODES
    u = x + ex * np.exp(1j * t)
    return float(np.mean(-np.log(np.maximum(np.abs(u - y), ey))))


def regularized_covariance(kernel: CovarianceKernel, x: complex, eps_x: float, y: complex, eps_y: float) -> float:
    """Covariance of the regularized field at (x, eps_x) and (y, eps_y).

    Interior sites use circle averages of radius eps. Boundary sites use the
    Poisson average at radius sqrt(1 - eps), under which the boundary
    diagonal is exactly -2 log eps.

    Raises:
        GeometryError: if an averaging circle leaves the disk.
        SingularityError: if both sites coincide without regularization.
    """
    x, y = complex(x), complex(y)
    kernel.check_point(x)
    kernel.check_point(y)
    if eps_x < 0 or eps_y < 0:
        raise DomainError(f"regularization scales must be nonnegative, got {eps_x}, {eps_y}")
    bx, by = _is_boundary(kernel, x), _is_boundary(kernel, y)
    if eps_x == 0 and eps_y == 0:
        return kernel.evaluate(x, y)
    if bx or by:
        return _smoothed_boundary(kernel, x, eps_x if bx else None, y, eps_y if by else None, eps_x, eps_y)
    for z, e in ((x, eps_x), (y, eps_y)):
        if abs(z) + e >= 1.0:
            raise GeometryError(f"averaging circle of radius {e} around {z} leaves the disk")
    near = _circle_average_near(x, eps_x, y, eps_y)
    # the reflected part is harmonic on the closed circles: mean value property
    far = -math.log(abs(1.0 - x * y.conjugate()))
    if kernel.kind is KernelKind.DIRICHLET_DISK:
        return near - far
    return near + far


def _smoothed_boundary(kernel, x, bx_eps, y, by_eps, eps_x, eps_y) -> float:
    rx = boundary_smoothing_radius(bx_eps) if bx_eps is not None else 1.0
    ry = boundary_smoothing_radius(by_eps) if by_eps is not None else 1.0
    if kernel.kind is KernelKind.DIRICHLET_DISK:
        raise GeometryError("Dirichlet kernels vanish on the boundary; no boundary sites")
    if kernel.on_circle:
        u, v = rx * x, ry * y
        value = -math.log(abs(1.0 - u * v.conjugate()))
        if kernel.kind is KernelKind.HALF_CIRCLE_GFF:
            value -= math.log(abs(1.0 - u * v))
        return value
    if bx_eps is not None and by_eps is not None:
        return -2.0 * math.log(abs(1.0 - rx * ry * x * y.conjugate()))
    # one interior site: harmonic in it, so its circle average is the centre value
    inner, e_inner, edge, r_edge = (y, eps_y, x, rx) if bx_eps is not None else (x, eps_x, y, ry)
    if abs(inner) + e_inner >= 1.0:
        raise GeometryError(f"averaging circle of radius {e_inner} around {inner} leaves the disk")
    return -2.0 * math.log(abs(1.0 - r_edge * edge.conjugate() * inner))


def regularized_variance(kernel: CovarianceKernel, x: complex, eps: float) -> float:
    return regularized_covariance(kernel, x, eps, x, eps)


def near_average(d, eps_a, eps_b, nodes: int = OVERLAP_NODES) -> np.ndarray:
    """Average of -log|u - v| over circles of radii eps_a, eps_b whose centres are ``d`` apart.

    Equals -log d once the circles are disjoint; ``eps_a = eps_b = 0`` gives
    -log d. The radii broadcast against ``d``.
    """
    d, ea, eb = np.broadcast_arrays(
        np.atleast_1d(np.asarray(d, dtype=float)), np.asarray(eps_a, dtype=float), np.asarray(eps_b, dtype=float)
    )
    big = np.maximum(ea, eb)
    small = np.minimum(ea, eb)
    with np.errstate(divide="ignore"):
        out = -np.log(np.maximum(d, big))
    close = (small > 0.0) & (d < big + small)
    if np.any(close):
        t = 2.0 * np.pi * (np.arange(nodes) + 0.5) / nodes
        ring = np.exp(1j * t)
        dist = np.abs(d[close][:, None] + big[close][:, None] * ring[None, :])
        out[close] = np.mean(-np.log(np.maximum(dist, small[close][:, None])), axis=1)
    return out


def on_unit_circle(z) -> np.ndarray:
    return np.abs(np.abs(np.asarray(z)) - 1.0) < 1e-12


def neumann_covariance(xa, eps_a, xb, eps_b) -> np.ndarray:
    """Regularized Neumann disk covariance between broadcast arrays of sites.

    Interior sites are circle averages of radius eps, sites on |z| = 1 are
    Poisson averages at radius sqrt(1 - eps). With eps = 0 the sites are
    unregularized and coincident points give +inf.
    """
    xa, ea, xb, eb = np.broadcast_arrays(
        np.asarray(xa, dtype=complex),
        np.asarray(eps_a, dtype=float),
        np.asarray(xb, dtype=complex),
        np.asarray(eps_b, dtype=float),
    )
    ba, bb = on_unit_circle(xa), on_unit_circle(xb)
    ra = np.where(ba, np.sqrt(np.maximum(1.0 - ea, 0.0)), 1.0)
    rb = np.where(bb, np.sqrt(np.maximum(1.0 - eb, 0.0)), 1.0)
    with np.errstate(divide="ignore"):
        interior = near_average(np.abs(xa - xb), np.where(ba, 0.0, ea), np.where(bb, 0.0, eb)).reshape(xa.shape)
        interior = interior - np.log(np.abs(1.0 - xa * np.conj(xb)))
        # one or two smoothed boundary sites: the field is harmonic in the interior site
        edge = -2.0 * np.log(np.abs(1.0 - ra * rb * xa * np.conj(xb)))
    return np.where(ba | bb, edge, interior)


def neumann_counterterm(z) -> np.ndarray:
    """W(z) = -log(1 - |z|^2) inside the disk, 0 on the boundary circle."""
    z = np.asarray(z, dtype=complex)
    inside = ~on_unit_circle(z)
    with np.errstate(divide="ignore"):
        w = -np.log(np.where(inside, 1.0 - np.abs(z) ** 2, 1.0))
    return np.where(inside, w, 0.0)


def bulk_covariance_block(kernel: CovarianceKernel, points: np.ndarray, eps: float) -> np.ndarray:
    """Regularized covariance matrix of interior sites sharing the scale ``eps``."""
    z = np.asarray(points, dtype=complex)
    if np.any(np.abs(z) + eps >= 1.0):
        raise GeometryError(f"an averaging circle of radius {eps} leaves the disk")
    d = np.abs(z[:, None] - z[None, :])
    near = near_average(d.ravel(), eps, eps).reshape(d.shape)
    far = -np.log(np.abs(1.0 - z[:, None] * np.conj(z[None, :])))
    if kernel.kind is KernelKind.DIRICHLET_DISK:
        return near - far
    return near + far


def boundary_covariance_block(points: np.ndarray, eps: float) -> np.ndarray:
    """Poisson-smoothed Neumann covariance of boundary sites sharing the scale ``eps``."""
    z = np.asarray(points, dtype=complex)
    r2 = boundary_smoothing_radius(eps) ** 2
    return -2.0 * np.log(np.abs(1.0 - r2 * z[:, None] * np.conj(z[None, :])))
