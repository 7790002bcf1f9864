"""Log-conformal factors rho, for metrics e^rho |dz|^2.

Every factor evaluates on complex numpy arrays and supplies its gradient and
flat Laplacian. Factors without closed forms fall back on central finite
differences.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from typing import Callable, override

import numpy as np

FD_STEP = 1e-5


class ConformalFactor(ABC):
    @abstractmethod
    def value(self, z: np.ndarray) -> np.ndarray:
        """rho at the points ``z``."""
        ...

    def gradient(self, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """(d rho/dx, d rho/dy) at ``z``."""
        z = np.asarray(z, dtype=complex)
        h = FD_STEP
        gx = (self.value(z + h) - self.value(z - h)) / (2 * h)
        gy = (self.value(z + 1j * h) - self.value(z - 1j * h)) / (2 * h)
        return gx, gy

    def laplacian(self, z: np.ndarray) -> np.ndarray:
        """Flat Laplacian d^2/dx^2 + d^2/dy^2 of rho."""
        z = np.asarray(z, dtype=complex)
        h = FD_STEP
        centre = self.value(z)
        total = self.value(z + h) + self.value(z - h) + self.value(z + 1j * h) + self.value(z - 1j * h)
        return (total - 4 * centre) / (h * h)

    def directional(self, z: np.ndarray, direction: np.ndarray) -> np.ndarray:
        """Derivative of rho along the unit vectors encoded as complex numbers."""
        gx, gy = self.gradient(z)
        direction = np.asarray(direction, dtype=complex)
        return gx * direction.real + gy * direction.imag

    @property
    def is_flat(self) -> bool:
        return False

    @property
    def is_harmonic(self) -> bool:
        return False

    def __add__(self, other: "ConformalFactor") -> "ConformalFactor":
        return SumFactor((self, other))

    def describe(self) -> dict:
        return {"kind": type(self).__name__}


class FlatFactor(ConformalFactor):
    @override
    def value(self, z):
        return np.zeros(np.shape(z))

    @override
    def gradient(self, z):
        return np.zeros(np.shape(z)), np.zeros(np.shape(z))

    @override
    def laplacian(self, z):
        return np.zeros(np.shape(z))

    @property
    @override
    def is_flat(self) -> bool:
        return True

    @property
    @override
    def is_harmonic(self) -> bool:
        return True


class ConstantFactor(ConformalFactor):
    def __init__(self, c: float) -> None:
        self.c = float(c)

    @override
    def value(self, z):
        return np.full(np.shape(z), self.c)

    @override
    def gradient(self, z):
        return np.zeros(np.shape(z)), np.zeros(np.shape(z))

    @override
    def laplacian(self, z):
        return np.zeros(np.shape(z))

    @property
    @override
    def is_harmonic(self) -> bool:
        return True

    @override
    def describe(self) -> dict:
        return {"kind": "constant", "c": self.c}


class HemisphereFactor(ConformalFactor):
    """rho = log(4 / (1 + |z|^2)^2): the round unit hemisphere on the unit disk."""

    @override
    def value(self, z):
        r2 = np.abs(np.asarray(z)) ** 2
        return np.log(4.0) - 2.0 * np.log1p(r2)

    @override
    def gradient(self, z):
        z = np.asarray(z, dtype=complex)
        denom = 1.0 + np.abs(z) ** 2
        return -4.0 * z.real / denom, -4.0 * z.imag / denom

    @override
    def laplacian(self, z):
        return -8.0 / (1.0 + np.abs(np.asarray(z)) ** 2) ** 2

    @override
    def describe(self) -> dict:
        return {"kind": "hemisphere"}


class HarmonicPolynomialFactor(ConformalFactor):
    """rho = Re sum_k c_k z^k."""

    def __init__(self, coefficients: list[complex] | tuple[complex, ...]) -> None:
        self.coefficients = tuple(complex(c) for c in coefficients)

    @override
    def value(self, z):
        z = np.asarray(z, dtype=complex)
        return np.real(np.polynomial.polynomial.polyval(z, self.coefficients))

    def _derivative(self, z):
        deriv = [k * c for k, c in enumerate(self.coefficients)][1:] or [0j]
        return np.polynomial.polynomial.polyval(np.asarray(z, dtype=complex), deriv)

    @override
    def gradient(self, z):
        d = self._derivative(z)
        return np.real(d), -np.imag(d)

    @override
    def laplacian(self, z):
        return np.zeros(np.shape(z))

    @property
    @override
    def is_harmonic(self) -> bool:
        return True

    @override
    def describe(self) -> dict:
        return {"kind": "harmonic_polynomial", "coefficients": [[c.real, c.imag] for c in self.coefficients]}


class RadialBumpFactor(ConformalFactor):
    """rho = a (1 - |z|^2)^2, which has vanishing normal derivative on |z| = 1."""

    def __init__(self, a: float) -> None:
        self.a = float(a)

    @override
    def value(self, z):
        return self.a * (1.0 - np.abs(np.asarray(z)) ** 2) ** 2

    @override
    def gradient(self, z):
        z = np.asarray(z, dtype=complex)
        s = -4.0 * self.a * (1.0 - np.abs(z) ** 2)
        return s * z.real, s * z.imag

    @override
    def laplacian(self, z):
        return self.a * (-8.0 + 16.0 * np.abs(np.asarray(z)) ** 2)

    @override
    def describe(self) -> dict:
        return {"kind": "radial_bump", "a": self.a}


class FunctionFactor(ConformalFactor):
    """A user supplied rho; derivatives by central differences."""

    def __init__(self, fn: Callable[[np.ndarray], np.ndarray]) -> None:
        self.fn = fn

    @override
    def value(self, z):
        return np.asarray(self.fn(np.asarray(z, dtype=complex)), dtype=float)


class SumFactor(ConformalFactor):
    def __init__(self, parts: tuple[ConformalFactor, ...]) -> None:
        self.parts = parts

    @override
    def value(self, z):
        return sum(p.value(z) for p in self.parts)

    @override
    def gradient(self, z):
        grads = [p.gradient(z) for p in self.parts]
        return sum(g[0] for g in grads), sum(g[1] for g in grads)

    @override
    def laplacian(self, z):
        return sum(p.laplacian(z) for p in self.parts)

    @property
    @override
    def is_flat(self) -> bool:
        return all(p.is_flat for p in self.parts)

    @property
    @override
    def is_harmonic(self) -> bool:
        return all(p.is_harmonic for p in self.parts)

    @override
    def describe(self) -> dict:
        return {"kind": "sum", "parts": [p.describe() for p in self.parts]}


FLAT = FlatFactor()


def make_factor(name: str, **kwargs) -> ConformalFactor:
    match name:
        case "flat":
            return FLAT
        case "constant":
            return ConstantFactor(kwargs.get("c", 0.0))
        case "hemisphere":
            return HemisphereFactor()
        case "bump":
            return RadialBumpFactor(kwargs.get("a", 0.1))
        case "harmonic":
            return HarmonicPolynomialFactor(kwargs.get("coefficients", (0.0,)))
        case _:
            raise ValueError(f"Unknown conformal factor: {name}")
