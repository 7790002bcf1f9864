from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

import numpy as np

from ..errors import DomainError, GeometryError
from ..geometry import SurfaceSpec, disk

Weight = Callable[[np.ndarray], np.ndarray]


class GmcRegion(Enum):
    BULK = "bulk"
    BOUNDARY = "boundary"


def unit_weight(z: np.ndarray) -> np.ndarray:
    return np.ones(np.shape(z), dtype=complex)


@dataclass(frozen=True)
class GmcSpec:
    """Imaginary chaos on the flat unit disk or its boundary circle.

    Bulk chaos integrates f(x) eps^{-beta^2/2} e^{i beta X_eps(x)} over the
    disk of radius ``support``; boundary chaos integrates
    f eps^{-beta^2/4} e^{i (beta/2) X_eps} against arc length on |z| = 1.
    """

    region: GmcRegion
    beta: float
    epsilon: float
    weight: Weight = unit_weight
    support: float = 1.0
    surface: SurfaceSpec = field(default_factory=disk)

    def __post_init__(self) -> None:
        if self.epsilon <= 0:
            raise DomainError(f"epsilon must be positive, got {self.epsilon}")
        if self.beta < 0:
            raise DomainError(f"beta must be nonnegative, got {self.beta}")
        if self.region is GmcRegion.BULK and self.support + self.epsilon >= 1.0:
            raise GeometryError(
                f"support radius {self.support} plus epsilon {self.epsilon} reaches the boundary"
            )

    @property
    def charge(self) -> float:
        """Coefficient of X_eps in the exponent."""
        return self.beta if self.region is GmcRegion.BULK else self.beta / 2.0

    @property
    def normalizer(self) -> float:
        exponent = self.beta**2 / 2.0 if self.region is GmcRegion.BULK else self.beta**2 / 4.0
        return self.epsilon ** (-exponent)

    @property
    def measure(self) -> float:
        """Total mass of the integration domain."""
        return math.pi * self.support**2 if self.region is GmcRegion.BULK else 2.0 * math.pi

    def with_epsilon(self, epsilon: float) -> "GmcSpec":
        return GmcSpec(self.region, self.beta, epsilon, self.weight, self.support, self.surface)

    def to_dict(self) -> dict:
        return {
            "region": self.region.value,
            "beta": self.beta,
            "epsilon": self.epsilon,
            "support": self.support,
        }


def indicator(radius: float) -> Weight:
    """Weight 1 on |z| <= radius, 0 outside."""

    def weight(z: np.ndarray) -> np.ndarray:
        return (np.abs(z) <= radius).astype(complex)

    return weight
