"""Regularized Dirichlet energies and metric pairings of harmonic forms."""

from __future__ import annotations

import math

import numpy as np

from ..errors import NonConvergence, UnsupportedSurface
from ..geometry import FLAT, ConformalFactor, SurfaceKind, gauss_legendre, periodic_nodes
from ..logs import get_logger
from .forms import FormSum, PoleForm

EPSILON_LADDER = (1e-2, 5e-3, 2.5e-3)
NORM_TOL = 1e-7
OUTER_NODES = 4096
SMALL_NODES = 256


def _as_pole_form(form) -> PoleForm:
    if isinstance(form, PoleForm):
        return form
    if isinstance(form, FormSum) and all(isinstance(f, PoleForm) for _, f in form.terms):
        out = None
        for c, f in form.terms:
            out = f.scaled(c) if out is None else out.plus(f.scaled(c))
        return out
    raise UnsupportedSurface("regularized norms need a harmonic pole form")


def _green_flux(form: PoleForm, center: complex, radius: float, outward: float, n: int) -> float:
    """Integral of psi d_nu psi dl over a circle; ``outward`` is +1 when nu points away from ``center``."""
    t, w = periodic_nodes(n, offset=0.5 * 2.0 * np.pi / n)
    e = np.exp(1j * t)
    z = center + radius * e
    psi = form.potential(z)
    grad = form.potential_gradient(z)
    dnu = outward * np.real(grad * np.conj(e))
    return float(np.sum(w * radius * psi * dnu))


def _excised_energy(form: PoleForm, eps: float, rho: ConformalFactor) -> float:
    """Energy over the surface minus metric disks of radius ``eps`` around the punctures, plus the counterterm."""
    surface = form.surface
    total = _green_flux(form, 0j, 1.0, 1.0, OUTER_NODES)
    if surface.kind is SurfaceKind.ANNULUS:
        total += _green_flux(form, 0j, surface.inner_radius, -1.0, OUTER_NODES)
    counter = 0.0
    for z, m in zip(surface.punctures, form.windings):
        if m == 0:
            continue
        radius = eps * math.exp(-float(rho.value(np.array([z]))[0]) / 2.0)
        total += _green_flux(form, z, radius, -1.0, SMALL_NODES)
        counter += m * m
    return total + counter * math.log(eps) / (2.0 * math.pi)


def regularized_norm(form, rho: ConformalFactor = FLAT, ladder: tuple[float, ...] = EPSILON_LADDER, tol: float = NORM_TOL) -> float:
    """Regularized energy of a harmonic form for the metric e^rho |dz|^2.

    The energy of the excised surface plus (1/2 pi) sum m_i^2 log eps is
    evaluated on an eps ladder and extrapolated in eps^2.

    Raises:
        NonConvergence: if the extrapolants of successive levels disagree beyond ``tol``.
    """
    pole_form = _as_pole_form(form)
    if pole_form.surface.kind not in (SurfaceKind.DISK, SurfaceKind.ANNULUS):
        raise UnsupportedSurface(f"no regularized norm on a {pole_form.surface.kind.value}")
    if not pole_form.surface.punctures or not any(pole_form.windings):
        return _excised_energy(pole_form, ladder[0], rho)
    levels = [_excised_energy(pole_form, eps, rho) for eps in ladder]
    extrapolated = []
    for (e1, n1), (e2, n2) in zip(zip(ladder, levels), zip(ladder[1:], levels[1:])):
        ratio = (e1 / e2) ** 2
        extrapolated.append((ratio * n2 - n1) / (ratio - 1.0))
    spread = max(extrapolated) - min(extrapolated)
    get_logger().debug("Regularized norm ladder", {"levels": levels, "extrapolated": extrapolated, "spread": spread})
    if spread > tol * max(1.0, abs(extrapolated[-1])):
        raise NonConvergence(f"regularized norm levels disagree by {spread:.3e} (tolerance {tol:.1e})")
    return extrapolated[-1]


def conformal_shift(form, rho: ConformalFactor) -> float:
    """(1/4 pi) sum m_i^2 rho(z_i), the metric dependence of the regularized norm."""
    surface = form.surface
    total = 0.0
    for z, m in zip(surface.punctures, form.windings):
        total += m * m * float(rho.value(np.array([z]))[0])
    return total / (4.0 * math.pi)


def _pairing_density(form, rho: ConformalFactor, z: np.ndarray) -> np.ndarray:
    ox, oy = form.evaluate(z)
    gx, gy = rho.gradient(z)
    return gx * ox + gy * oy


def metric_pairing(form, rho: ConformalFactor, n_r: int = 64, n_theta: int = 128) -> float:
    """Integral of <d rho, omega> over the flat surface.

    Poles at punctures are integrated in polar coordinates centred on the
    puncture, where the density is bounded.
    """
    pole_form = _as_pole_form(form)
    surface = pole_form.surface
    if surface.kind not in (SurfaceKind.DISK, SurfaceKind.ANNULUS):
        raise UnsupportedSurface(f"no metric pairing on a {surface.kind.value}")
    interior = np.array([surface.is_interior(complex(a)) for a in pole_form.poles], dtype=bool)
    smooth = PoleForm(surface, pole_form.poles[~interior], pole_form.residues[~interior], ())
    lo = surface.inner_radius if surface.kind is SurfaceKind.ANNULUS else 0.0
    r, wr = gauss_legendre(lo, 1.0, n_r)
    t, wt = periodic_nodes(2 * n_theta)
    z = (r[:, None] * np.exp(1j * t[None, :])).ravel()
    weights = np.outer(wr * r, wt).ravel()
    total = float(np.sum(weights * _pairing_density(smooth, rho, z)))
    for a, c in zip(pole_form.poles[interior], pole_form.residues[interior]):
        total += c * _pole_pairing(surface, complex(a), rho, n_r, n_theta)
    return total


def _ray_intervals(surface, a: complex, phi: float) -> list[tuple[float, float]]:
    e = complex(math.cos(phi), math.sin(phi))
    b = (np.conj(a) * e).real
    exit_outer = -b + math.sqrt(b * b + 1.0 - abs(a) ** 2)
    if surface.kind is not SurfaceKind.ANNULUS:
        return [(0.0, exit_outer)]
    disc = b * b - (abs(a) ** 2 - surface.inner_radius**2)
    if disc <= 0.0 or -b - math.sqrt(disc) <= 0.0:
        return [(0.0, exit_outer)]
    return [(0.0, -b - math.sqrt(disc)), (-b + math.sqrt(disc), exit_outer)]


def _pole_pairing(surface, a: complex, rho: ConformalFactor, n_r: int, n_theta: int) -> float:
    """Integral of <d rho, d theta_a / 2 pi> over the surface, in polar coordinates about ``a``."""
    breaks = [0.0, 2.0 * math.pi]
    if surface.kind is SurfaceKind.ANNULUS:
        back = math.atan2(-a.imag, -a.real) % (2.0 * math.pi)
        half = math.asin(surface.inner_radius / abs(a))
        breaks += [(back - half) % (2.0 * math.pi), (back + half) % (2.0 * math.pi)]
    breaks = sorted(set(breaks))
    total = 0.0
    for lo, hi in zip(breaks, breaks[1:]):
        phis, wphi = gauss_legendre(lo, hi, n_theta)
        for phi, w_phi in zip(phis, wphi):
            e = complex(math.cos(phi), math.sin(phi))
            for s0, s1 in _ray_intervals(surface, a, phi):
                s, ws = gauss_legendre(s0, s1, n_r)
                z = a + s * e
                # d rho along the angular direction about a, divided by the radius
                total += w_phi * float(np.sum(ws * rho.directional(z, np.full(z.shape, 1j * e))))
    return total / (2.0 * math.pi)
