"""The curvature term K^delta of a closed form and its anomaly."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from ..errors import UnsupportedSurface
from ..geometry import FLAT, ConformalFactor, SurfaceKind, curve_curvature_integral, gauss_legendre
from ..logs import get_logger
from .family import SeparatingFamily, dual_cycle_integrals
from .forms import Form
from .primitive import CutSurface

MAX_PANEL = math.pi / 16
PANEL_NODES = 24
BULK_RADIAL_NODES = 48
BOUNDARY_STEP_IN = 1e-7


def _panels(a: float, b: float, max_len: float = MAX_PANEL, n: int = PANEL_NODES) -> tuple[np.ndarray, np.ndarray]:
    count = max(1, math.ceil((b - a) / max_len))
    edges = np.linspace(a, b, count + 1)
    parts = [gauss_legendre(lo, hi, n) for lo, hi in zip(edges, edges[1:])]
    return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])


def _circle_arcs(angles: np.ndarray) -> list[tuple[float, float]]:
    if angles.size == 0:
        return [(0.0, 2.0 * math.pi)]
    a = np.sort(angles)
    return [(float(a[j]), float(a[j + 1])) for j in range(a.size - 1)] + [(float(a[-1]), float(a[0]) + 2.0 * math.pi)]


def _circle_primitive(cut: CutSurface, form: Form, hub_values: np.ndarray, radius: float, inward: float, lo: float, hi: float, thetas: np.ndarray) -> np.ndarray:
    """I along an arc of |z| = radius that meets no curve between ``lo`` and ``hi``."""
    mid = 0.5 * (lo + hi)
    on_circle = radius * complex(math.cos(mid), math.sin(mid))
    inside = on_circle * (1.0 + inward / radius)
    start = cut.primitive(form, [inside], hub_values)[0] + form.segment_integral(inside, on_circle)
    return start + form.circle_increments(radius, mid, thetas)


def boundary_term(cut: CutSurface, form: Form, rho: ConformalFactor, hub_values: np.ndarray) -> float:
    """Integral of k I dl over the boundary, against flat arc length."""
    surface = cut.surface
    circles = [(1.0, 1.0, -BOUNDARY_STEP_IN)]
    if surface.kind is SurfaceKind.ANNULUS:
        circles.append((surface.inner_radius, -1.0, BOUNDARY_STEP_IN))
    total = 0.0
    for radius, orientation, inward in circles:
        for lo, hi in _circle_arcs(cut.circle_cut_angles(radius)):
            t, w = _panels(lo, hi)
            z = radius * np.exp(1j * t)
            values = _circle_primitive(cut, form, hub_values, radius, inward, lo, hi, t)
            # outward normal is orientation * z/|z|; k_flat dl = orientation dtheta
            density = orientation + 0.5 * radius * rho.directional(z, orientation * np.exp(1j * t))
            total += float(np.sum(w * density * values))
    return total


def bulk_term(cut: CutSurface, form: Form, rho: ConformalFactor, hub_values: np.ndarray, n_r: int = BULK_RADIAL_NODES) -> float:
    """1/2 int K I dv = -1/2 int (flat Laplacian of rho) I dx; zero for harmonic rho."""
    if rho.is_harmonic:
        return 0.0
    surface = cut.surface
    lo = surface.inner_radius if surface.kind is SurfaceKind.ANNULUS else 0.0
    radii, wr = gauss_legendre(lo, 1.0, n_r)
    total = 0.0
    for r, w_r in zip(radii, wr):
        for a, b in _circle_arcs(cut.circle_cut_angles(r)):
            t, w = _panels(a, b)
            z = r * np.exp(1j * t)
            values = _circle_primitive(cut, form, hub_values, r, 0.0, a, b, t)
            total += -0.5 * float(np.sum(w * r * w_r * rho.laplacian(z) * values))
    return total


def interior_cycle_term(cycles: Sequence[tuple[float, float, float, float]]) -> float:
    """Sum of (period_a * curvature_b - period_b * curvature_a) over interior (a, b) pairs."""
    return float(sum(pa * kb - pb * ka for pa, pb, ka, kb in cycles))


def curvature_term_parts(
    form: Form,
    family: SeparatingFamily,
    base: complex,
    rho: ConformalFactor = FLAT,
    interior_cycles: Sequence[tuple[float, float, float, float]] = (),
    cut: CutSurface | None = None,
) -> dict[str, float]:
    """The four contributions to K^delta, keyed ``bulk``, ``boundary``, ``interior`` and ``dual``."""
    if family.surface.kind not in (SurfaceKind.DISK, SurfaceKind.ANNULUS):
        raise UnsupportedSurface(f"curvature terms are computed on the disk and annulus, not a {family.surface.kind.value}")
    cut = cut if cut is not None else CutSurface(family, base)
    values = cut.hub_values(form)
    dual = dual_cycle_integrals(form, family)
    parts = {
        "bulk": bulk_term(cut, form, rho, values),
        "boundary": boundary_term(cut, form, rho, values),
        "interior": interior_cycle_term(interior_cycles),
        "dual": float(sum(e * curve_curvature_integral(c, rho) for e, c in zip(dual, family.curves))),
    }
    get_logger().debug("Curvature term", {"base": str(complex(base)), **parts})
    return parts


def curvature_term(
    form: Form,
    family: SeparatingFamily,
    base: complex,
    rho: ConformalFactor = FLAT,
    interior_cycles: Sequence[tuple[float, float, float, float]] = (),
) -> float:
    """K^delta_{x0}(omega) for the metric e^rho |dz|^2.

    Raises:
        PathError: if some quadrature point cannot be reached inside the cut surface.
    """
    return math.fsum(curvature_term_parts(form, family, base, rho, interior_cycles).values())


def anomaly_step(family: SeparatingFamily) -> float:
    """Spacing of the lattice the anomaly lives in."""
    return math.pi / 2.0 if family.surface.corner_count else math.pi


def anomaly(
    form: Form,
    family_a: SeparatingFamily,
    family_b: SeparatingFamily,
    base: complex,
    rho: ConformalFactor = FLAT,
) -> float:
    """K^{delta_b} - K^{delta_a} at the same base point."""
    value = curvature_term(form, family_b, base, rho) - curvature_term(form, family_a, base, rho)
    step = anomaly_step(family_a)
    get_logger().debug(
        "Anomaly", {"value": value, "multiple": value / step, "lattice_distance": lattice_offset(value, step)}
    )
    return value


def lattice_offset(value: float, step: float = math.pi) -> float:
    """Distance from ``value`` to the nearest multiple of ``step``."""
    return abs(value - step * round(value / step))


def base_point_change(form: Form, family: SeparatingFamily, base: complex, new_base: complex) -> float:
    """Predicted K_{new_base} - K_{base}: -(2 pi chi) I_base(new_base) for Neumann boundaries."""
    chi = family.surface.euler_char
    if chi == 0:
        return 0.0
    return -2.0 * math.pi * chi * float(CutSurface(family, base).primitive(form, [new_base])[0])
