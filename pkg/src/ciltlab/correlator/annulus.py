"""Topological weights of the annulus lattice.

On the annulus the harmonic forms with given puncture windings form a
lattice indexed by the inner cycle k. Each class contributes its energy
weight, the phases of the electric charges along its primitive and the
curvature term of the chosen separating family.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from ..errors import GeometryError, UnsupportedSurface
from ..geometry import SurfaceKind
from ..logs import get_logger
from ..topology import SeparatingFamily, annulus_form, curvature_term, regularized_norm
from .config import CorrelatorConfig
from .disk import clear_base_point

ANNULUS_TAIL = 1e-14
MAX_LATTICE_INDEX = 10_000


def _check_family(config: CorrelatorConfig, family: SeparatingFamily) -> None:
    surface = family.surface
    if surface.kind is not SurfaceKind.ANNULUS:
        raise UnsupportedSurface(f"annulus weights need the annulus, not a {surface.kind.value}")
    positions = [c.position for c in config.charges.bulk]
    if len(positions) != len(surface.punctures) or any(abs(a - b) > 1e-12 for a, b in zip(positions, surface.punctures)):
        raise GeometryError("the family's punctures must be the bulk insertions, in order")


def annulus_topological_weight(
    config: CorrelatorConfig, family: SeparatingFamily, k: int, base: complex | None = None
) -> complex:
    """e^{-pi R^2 |omega_k|^2_reg} e^{i sum c 2 pi R I(x)} e^{-i Q R K(omega_k)} for lattice coordinate k.

    Raises:
        UnsupportedSurface: if the family does not live on an annulus.
        GeometryError: if the family's punctures are not the bulk insertions.
    """
    _check_family(config, family)
    charges, params = config.charges, config.params
    base = complex(base) if base is not None else clear_base_point(family)
    form = annulus_form(family.surface, charges.windings, int(k))
    r = params.radius
    angle = 0.0
    if charges.bulk:
        bulk = np.array([c.position for c in charges.bulk], dtype=complex)
        tangents = np.array([c.tangent_angle for c in charges.bulk])
        angle += float(np.sum(np.array(charges.alphas) * form.winding_angle(bulk, base, tangents)))
    if charges.boundary:
        edge = np.array([c.position for c in charges.boundary], dtype=complex)
        angle += float(np.sum(np.array(charges.etas) / 2.0 * form.winding_angle(edge, base)))
    norm = regularized_norm(form)
    k_term = curvature_term(form, family, base) if form.poles.size else 0.0
    return cmath.exp(-math.pi * r * r * norm + 1j * r * angle - 1j * params.q_charge * r * k_term)


def annulus_topological_sum(
    config: CorrelatorConfig,
    family: SeparatingFamily,
    base: complex | None = None,
    tail: float = ANNULUS_TAIL,
) -> tuple[complex, dict[int, complex]]:
    """Sum of the topological weights over the lattice and the weight of each k.

    The energy is quadratic in k with leading coefficient log(1/r)/(2 pi), so
    the moduli decay like a Gaussian; summation starts at the largest weight
    and stops once the geometric bound on both tails drops below ``tail``
    relative to the running sum.
    """
    _check_family(config, family)
    base = complex(base) if base is not None else clear_base_point(family)
    r0 = family.surface.inner_radius
    curvature = math.pi * config.params.radius**2 * math.log(1.0 / r0) / (2.0 * math.pi)
    terms: dict[int, complex] = {}

    def term(k: int) -> complex:
        if k not in terms:
            terms[k] = annulus_topological_weight(config, family, k, base)
        return terms[k]

    span = 4 * sum(abs(m) for m in config.charges.windings) + 2
    center = max(range(-span, span + 1), key=lambda k: abs(term(k)))
    total = term(center)
    scale = abs(total)
    step = 1
    while step < MAX_LATTICE_INDEX:
        up, down = term(center + step), term(center - step)
        total += up + down
        scale = max(scale, abs(total))
        ratio = math.exp(-2.0 * curvature * step)
        if max(abs(up), abs(down)) / max(1.0 - ratio, 1e-300) < tail * max(scale, 1e-300):
            break
        step += 1
    get_logger().debug("Annulus sum", {"center": center, "terms": len(terms), "value_re": total.real, "value_im": total.imag})
    return total, {k: terms[k] for k in range(center - step, center + step + 1)}
