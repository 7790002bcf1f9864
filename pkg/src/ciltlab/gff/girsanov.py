"""Girsanov shifts and the Gaussian identities behind them."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..geometry import FLAT, ConformalFactor, boundary_curvature_density, bulk_grid, disk
from ..montecarlo import McEstimate, summarize
from .kernels import CovarianceKernel, KernelKind, make_kernel, regularized_covariance
from .sampler import FieldSite, covariance_matrix, sample_field_at

CURVATURE_ORDER = 64


@dataclass(frozen=True)
class LinearFunctional:
    """sum_j w_j X_eps(y_j), optionally with the curvature coupling -Q/(4 pi) int K X - Q/(2 pi) int k X."""

    sites: tuple[FieldSite, ...] = ()
    weights: tuple[float, ...] = ()
    q_charge: float = 0.0
    rho: ConformalFactor = FLAT


def _curvature_part(kernel: CovarianceKernel, fn: LinearFunctional, x: complex, eps: float) -> float:
    """-(Q/4 pi) int K C dv - (Q/2 pi) int k C dl on the disk, for the metric e^rho |dz|^2."""
    if fn.q_charge == 0.0:
        return 0.0
    surface = disk()
    pts, w = bulk_grid(surface, CURVATURE_ORDER, 2 * CURVATURE_ORDER)
    bulk = 0.0
    if not fn.rho.is_harmonic:
        # K dv = -(flat Laplacian of rho) dx
        density = -fn.rho.laplacian(pts)
        cov = np.array([regularized_covariance(kernel, x, eps, complex(p), 0.0) for p in pts])
        bulk = float(np.sum(w * density * cov))
    edge = 0.0
    for piece, density in boundary_curvature_density(surface, fn.rho, 4 * CURVATURE_ORDER):
        cov = np.array([regularized_covariance(kernel, x, eps, complex(p), 0.0) for p in piece.points])
        edge += float(np.sum(piece.weights * density * cov))
    return -fn.q_charge / (4.0 * math.pi) * bulk - fn.q_charge / (2.0 * math.pi) * edge


def girsanov_shift(kernel: CovarianceKernel, fn: LinearFunctional) -> Callable[[complex, float], float]:
    """u(x, eps) = covariance of X_eps(x) with the functional."""

    def shift(x: complex, eps: float = 0.0) -> float:
        total = 0.0
        for site, w in zip(fn.sites, fn.weights):
            if w != 0.0:
                total += w * regularized_covariance(kernel, x, eps, site.point, site.eps)
        if kernel.kind is KernelKind.NEUMANN_DISK:
            total += _curvature_part(kernel, fn, x, eps)
        return total

    return shift


@dataclass(frozen=True)
class IdentityCheck:
    """Two Monte Carlo sides of a Gaussian identity, from the same samples."""

    lhs: McEstimate
    rhs: McEstimate
    difference: McEstimate

    def consistent(self, sigmas: float = 3.0) -> bool:
        return self.difference.within(0.0, sigmas)


def real_girsanov_check(
    kernel: CovarianceKernel,
    sites: tuple[FieldSite, ...],
    h: tuple[float, ...],
    g: tuple[float, ...],
    n_samples: int,
    seed: int,
) -> IdentityCheck:
    """E[<X,h> e^Y] against e^{E Y^2/2} E[<X + E[YX], h>] with Y = <X, g>."""
    samples = sample_field_at(kernel, sites, n_samples, seed)
    cov = covariance_matrix(kernel, sites)
    h_vec = np.asarray(h, dtype=float)
    g_vec = np.asarray(g, dtype=float)
    var_y = float(g_vec @ cov @ g_vec)
    shift = cov @ g_vec
    x = samples.values
    lhs_values = (x @ h_vec) * np.exp(x @ g_vec)
    rhs_values = math.exp(var_y / 2.0) * ((x + shift) @ h_vec)
    return IdentityCheck(
        summarize(lhs_values, seed),
        summarize(rhs_values, seed),
        summarize(lhs_values - rhs_values, seed),
    )


def imaginary_girsanov_check(
    kernel: CovarianceKernel,
    sites: tuple[FieldSite, ...],
    g: tuple[float, ...],
    n_samples: int,
    seed: int,
) -> IdentityCheck:
    """E[e^{iY}] against e^{-E Y^2 / 2} with Y = <X, g>."""
    samples = sample_field_at(kernel, sites, n_samples, seed)
    g_vec = np.asarray(g, dtype=float)
    var_y = float(g_vec @ covariance_matrix(kernel, sites) @ g_vec)
    values = np.exp(1j * (samples.values @ g_vec))
    target = math.exp(-var_y / 2.0)
    lhs = summarize(values, seed)
    rhs = McEstimate(complex(target), 0.0, n_samples, seed)
    return IdentityCheck(lhs, rhs, summarize(values - target, seed))


def doubling_residual(x: complex, y: complex) -> float:
    """Neumann kernel minus (Dirichlet kernel plus its reflected term -2 log|1 - x conj(y)|)."""
    neumann = make_kernel(KernelKind.NEUMANN_DISK).evaluate(x, y)
    dirichlet = make_kernel(KernelKind.DIRICHLET_DISK).evaluate(x, y)
    return neumann - (dirichlet - 2.0 * math.log(abs(1.0 - complex(x) * complex(y).conjugate())))


__all__ = [
    "LinearFunctional",
    "IdentityCheck",
    "girsanov_shift",
    "real_girsanov_check",
    "imaginary_girsanov_check",
    "doubling_residual",
]
