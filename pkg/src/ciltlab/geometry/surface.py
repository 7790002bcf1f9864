from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from ..errors import DomainError, GeometryError

BOUNDARY_TOL = 1e-12


class SurfaceKind(Enum):
    CIRCLE = "circle"
    HALF_CIRCLE = "half_circle"
    DISK = "disk"
    HALF_DISK = "half_disk"
    ANNULUS = "annulus"


class BoundaryLabel(Enum):
    NEUMANN = "neumann"
    DIRICHLET = "dirichlet"
    MIXED = "mixed"


@dataclass(frozen=True)
class SurfaceSpec:
    """A flat reference surface in the complex plane.

    The disk is the closed unit disk, the half-disk its upper half and the
    annulus ``inner_radius <= |z| <= 1``. The circle kinds are the
    one-dimensional boundaries used by the boundary free fields.
    """

    kind: SurfaceKind
    inner_radius: float | None = None
    punctures: tuple[complex, ...] = field(default_factory=tuple)
    boundary_labels: tuple[BoundaryLabel, ...] = field(default_factory=tuple)
    euler_char: int = 1
    corner_count: int = 0

    def __post_init__(self) -> None:
        if self.kind is SurfaceKind.ANNULUS:
            if self.inner_radius is None or not (0.0 < self.inner_radius < 1.0):
                raise DomainError(f"annulus inner radius {self.inner_radius} must lie in (0, 1)")
        for j, z in enumerate(self.punctures):
            if not self.is_interior(z):
                raise GeometryError(f"puncture {j} at {z} is not strictly interior")
            for i in range(j):
                if abs(self.punctures[i] - z) < 1e-9:
                    raise GeometryError(f"punctures {i} and {j} coincide at {z}")

    @property
    def is_two_dimensional(self) -> bool:
        return self.kind in (SurfaceKind.DISK, SurfaceKind.HALF_DISK, SurfaceKind.ANNULUS)

    @property
    def corner_turning(self) -> float:
        """Sum of the turning angles at the corners of the flat boundary."""
        return self.corner_count * np.pi / 2.0

    @property
    def boundary_circles(self) -> tuple[str, ...]:
        match self.kind:
            case SurfaceKind.ANNULUS:
                return ("outer", "inner")
            case SurfaceKind.DISK | SurfaceKind.HALF_DISK:
                return ("outer",)
            case _:
                return ()

    def contains(self, z: complex, tol: float = BOUNDARY_TOL) -> bool:
        r = abs(z)
        match self.kind:
            case SurfaceKind.DISK:
                return r <= 1.0 + tol
            case SurfaceKind.ANNULUS:
                return self.inner_radius - tol <= r <= 1.0 + tol
            case SurfaceKind.HALF_DISK:
                return r <= 1.0 + tol and z.imag >= -tol
            case SurfaceKind.CIRCLE:
                return abs(r - 1.0) <= tol
            case SurfaceKind.HALF_CIRCLE:
                return abs(r - 1.0) <= tol and z.imag >= -tol
        return False

    def is_interior(self, z: complex, tol: float = BOUNDARY_TOL) -> bool:
        r = abs(z)
        match self.kind:
            case SurfaceKind.DISK:
                return r < 1.0 - tol
            case SurfaceKind.ANNULUS:
                return self.inner_radius + tol < r < 1.0 - tol
            case SurfaceKind.HALF_DISK:
                return r < 1.0 - tol and z.imag > tol
        return False

    def distance_to_boundary(self, z: complex) -> float:
        r = abs(z)
        match self.kind:
            case SurfaceKind.DISK:
                return 1.0 - r
            case SurfaceKind.ANNULUS:
                return min(1.0 - r, r - self.inner_radius)
            case SurfaceKind.HALF_DISK:
                return min(1.0 - r, z.imag)
        raise GeometryError(f"distance to boundary is undefined on a {self.kind.value}")

    def with_punctures(self, punctures: tuple[complex, ...] | list[complex]) -> "SurfaceSpec":
        return SurfaceSpec(
            kind=self.kind,
            inner_radius=self.inner_radius,
            punctures=tuple(complex(p) for p in punctures),
            boundary_labels=self.boundary_labels,
            euler_char=self.euler_char,
            corner_count=self.corner_count,
        )

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "inner_radius": self.inner_radius,
            "punctures": [[complex(p).real, complex(p).imag] for p in self.punctures],
            "boundary_labels": [b.value for b in self.boundary_labels],
            "euler_char": self.euler_char,
            "corner_count": self.corner_count,
        }


def disk(punctures: tuple[complex, ...] | list[complex] = ()) -> SurfaceSpec:
    return SurfaceSpec(
        kind=SurfaceKind.DISK,
        punctures=tuple(complex(p) for p in punctures),
        boundary_labels=(BoundaryLabel.NEUMANN,),
        euler_char=1,
    )


def annulus(inner_radius: float, punctures: tuple[complex, ...] | list[complex] = ()) -> SurfaceSpec:
    return SurfaceSpec(
        kind=SurfaceKind.ANNULUS,
        inner_radius=inner_radius,
        punctures=tuple(complex(p) for p in punctures),
        boundary_labels=(BoundaryLabel.NEUMANN, BoundaryLabel.NEUMANN),
        euler_char=0,
    )


def half_disk(punctures: tuple[complex, ...] | list[complex] = ()) -> SurfaceSpec:
    return SurfaceSpec(
        kind=SurfaceKind.HALF_DISK,
        punctures=tuple(complex(p) for p in punctures),
        boundary_labels=(BoundaryLabel.NEUMANN,),
        euler_char=1,
        corner_count=2,
    )


def circle() -> SurfaceSpec:
    return SurfaceSpec(kind=SurfaceKind.CIRCLE, euler_char=0)


def half_circle() -> SurfaceSpec:
    return SurfaceSpec(kind=SurfaceKind.HALF_CIRCLE, euler_char=1)


def make_surface(kind: str, inner_radius: float | None = None, punctures: tuple[complex, ...] | list[complex] = ()) -> SurfaceSpec:
    """Build a surface from its kind name as used in experiment configs."""
    match kind.replace("-", "_"):
        case "disk":
            return disk(punctures)
        case "annulus":
            if inner_radius is None:
                raise DomainError("annulus needs an inner radius")
            return annulus(inner_radius, punctures)
        case "half_disk":
            return half_disk(punctures)
        case "circle":
            return circle()
        case "half_circle":
            return half_circle()
        case _:
            raise DomainError(f"unknown surface kind {kind!r} (expected circle, half_circle, disk, half_disk or annulus)")
