from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from ..errors import DomainError, UnsupportedSurface
from ..geometry import FLAT, ConformalFactor, SurfaceKind, SurfaceSpec
from ..logs import get_logger
from .forms import PoleForm, annulus_form, disk_form
from .norms import regularized_norm

THETA_TAIL = 1e-14
MAX_LATTICE_INDEX = 10_000


@dataclass(frozen=True)
class CohomologyLattice:
    """Classes of harmonic forms with prescribed puncture windings.

    ``rank`` is 0 on the disk (one class) and 1 on the annulus, where the
    integer coordinate is the inner boundary cycle.
    """

    surface: SurfaceSpec
    windings: tuple[int, ...]
    rank: int
    representative: Callable[..., PoleForm]


def cohomology_lattice(surface: SurfaceSpec, m: list[int] | tuple[int, ...]) -> CohomologyLattice:
    m = tuple(int(x) for x in m)
    if len(m) != len(surface.punctures):
        raise DomainError(f"{len(m)} windings given for {len(surface.punctures)} punctures")
    match surface.kind:
        case SurfaceKind.DISK:
            return CohomologyLattice(surface, m, 0, lambda: disk_form(surface, m))
        case SurfaceKind.ANNULUS:
            return CohomologyLattice(surface, m, 1, lambda k: annulus_form(surface, m, int(k)))
    raise UnsupportedSurface(f"cohomology lattices are available on the disk and annulus, not a {surface.kind.value}")


def theta_sum(surface: SurfaceSpec, m: list[int] | tuple[int, ...], a: float, rho: ConformalFactor = FLAT) -> float:
    """Sum of exp(-a * regularized norm) over the lattice classes.

    On the annulus the norm is quadratic in the inner cycle k with leading
    coefficient log(1/r)/(2 pi); the sum stops once both tails drop below
    ``THETA_TAIL``.
    """
    if a <= 0:
        raise DomainError(f"a must be positive, got {a}")
    lattice = cohomology_lattice(surface, m)
    if lattice.rank == 0:
        return math.exp(-a * regularized_norm(lattice.representative(), rho))
    curvature = a * math.log(1.0 / surface.inner_radius) / (2.0 * math.pi)
    norms: dict[int, float] = {}

    def term(k: int) -> float:
        if k not in norms:
            norms[k] = regularized_norm(lattice.representative(k), rho)
        return math.exp(-a * norms[k])

    # the norm is convex in k; start from its minimum
    center = min(range(-len(m) * 4 - 2, len(m) * 4 + 3), key=lambda k: norms.setdefault(k, regularized_norm(lattice.representative(k), rho)))
    total = term(center)
    step = 1
    while step < MAX_LATTICE_INDEX:
        up, down = term(center + step), term(center - step)
        total += up + down
        # remaining tail is bounded by a geometric series in exp(-2 * curvature * step)
        ratio = math.exp(-2.0 * curvature * step)
        if max(up, down) / max(1.0 - ratio, 1e-300) < THETA_TAIL * max(total, 1e-300):
            break
        step += 1
    get_logger().debug("Theta sum", {"center": center, "terms": 2 * step + 1, "value": total})
    return total
