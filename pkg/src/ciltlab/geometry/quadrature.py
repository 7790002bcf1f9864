from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import roots_jacobi

from ..errors import UnsupportedSurface
from .surface import SurfaceKind, SurfaceSpec


def gauss_legendre(a: float, b: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    half = (b - a) / 2.0
    return a + half * (x + 1.0), half * w


def gauss_jacobi_end(a: float, b: float, n: int, power: float, at_left: bool = True) -> tuple[np.ndarray, np.ndarray]:
    """Rule on [a, b] exact for |x - end|^power times a polynomial of degree 2n - 1.

    The weights absorb the singular factor, so the rule is applied to the full
    integrand like a plain Gauss rule.
    """
    if power == 0.0:
        return gauss_legendre(a, b, n)
    t, wt = roots_jacobi(n, 0.0, power) if at_left else roots_jacobi(n, power, 0.0)
    half = (b - a) / 2.0
    x = a + half * (t + 1.0)
    dist = (1.0 + t) if at_left else (1.0 - t)
    return x, half * wt / dist**power


def graded_gauss_legendre(
    a: float,
    b: float,
    n: int = 8,
    depth: int = 24,
    left: bool = True,
    right: bool = True,
    left_power: float = 0.0,
    right_power: float = 0.0,
) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre with panels halving toward the graded endpoints.

    Resolves integrable algebraic endpoint singularities and features at
    every scale down to (b - a) 2^-depth. A nonzero ``left_power`` or
    ``right_power`` puts a Gauss-Jacobi rule for |x - end|^power on the
    innermost panel at that end.
    """
    if b <= a:
        return np.empty(0), np.empty(0)
    if left and right:
        mid = (a + b) / 2.0
        xl, wl = graded_gauss_legendre(a, mid, n, depth, True, False, left_power=left_power)
        xr, wr = graded_gauss_legendre(mid, b, n, depth, False, True, right_power=right_power)
        return np.concatenate([xl, xr]), np.concatenate([wl, wr])
    if not (left or right):
        return gauss_legendre(a, b, n)
    fractions = np.concatenate([[0.0], 0.5 ** np.arange(depth, -1, -1)])
    edges = a + (b - a) * fractions if left else b - (b - a) * fractions[::-1]
    parts = [gauss_legendre(lo, hi, n) for lo, hi in zip(edges, edges[1:])]
    if left:
        parts[0] = gauss_jacobi_end(edges[0], edges[1], n, left_power, at_left=True)
    else:
        parts[-1] = gauss_jacobi_end(edges[-2], edges[-1], n, right_power, at_left=False)
    return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])


def periodic_nodes(n: int, offset: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
    """Trapezoid nodes on a full period, spectrally accurate for smooth periodic integrands."""
    theta = offset + 2.0 * np.pi * np.arange(n) / n
    return theta, np.full(n, 2.0 * np.pi / n)


@dataclass(frozen=True)
class BoundaryPiece:
    """Quadrature on one boundary component with flat data."""

    name: str
    points: np.ndarray
    weights: np.ndarray
    normals: np.ndarray
    k_flat: np.ndarray


def bulk_grid(surface: SurfaceSpec, n_r: int, n_theta: int) -> tuple[np.ndarray, np.ndarray]:
    """Tensor polar grid over the flat surface: points and area weights."""
    match surface.kind:
        case SurfaceKind.DISK:
            r, wr = gauss_legendre(0.0, 1.0, n_r)
            t, wt = periodic_nodes(n_theta)
        case SurfaceKind.ANNULUS:
            r, wr = gauss_legendre(surface.inner_radius, 1.0, n_r)
            t, wt = periodic_nodes(n_theta)
        case SurfaceKind.HALF_DISK:
            r, wr = gauss_legendre(0.0, 1.0, n_r)
            t, wt = gauss_legendre(0.0, np.pi, n_theta)
        case _:
            raise UnsupportedSurface(f"no bulk quadrature on a {surface.kind.value}")
    rr, tt = np.meshgrid(r, t, indexing="ij")
    weights = np.outer(wr * r, wt)
    return (rr * np.exp(1j * tt)).ravel(), weights.ravel()


def boundary_grid(surface: SurfaceSpec, n: int) -> list[BoundaryPiece]:
    match surface.kind:
        case SurfaceKind.DISK:
            t, w = periodic_nodes(n)
            z = np.exp(1j * t)
            return [BoundaryPiece("outer", z, w, z, np.ones(n))]
        case SurfaceKind.ANNULUS:
            r0 = surface.inner_radius
            t, w = periodic_nodes(n)
            z = np.exp(1j * t)
            return [
                BoundaryPiece("outer", z, w, z, np.ones(n)),
                BoundaryPiece("inner", r0 * z, r0 * w, -z, np.full(n, -1.0 / r0)),
            ]
        case SurfaceKind.HALF_DISK:
            t, w = gauss_legendre(0.0, np.pi, n)
            arc = np.exp(1j * t)
            x, wx = gauss_legendre(-1.0, 1.0, n)
            return [
                BoundaryPiece("arc", arc, w, arc, np.ones(n)),
                BoundaryPiece("segment", x.astype(complex), wx, np.full(n, -1j), np.zeros(n)),
            ]
        case _:
            raise UnsupportedSurface(f"no boundary quadrature on a {surface.kind.value}")
