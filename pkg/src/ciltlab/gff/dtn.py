"""Harmonic extension into the unit disk and the Dirichlet-to-Neumann map."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..geometry import gauss_legendre, periodic_nodes


@dataclass(frozen=True)
class BoundaryModes:
    """Real trigonometric data c0 + sum_n (a_n cos n theta + b_n sin n theta), n >= 1."""

    constant: float
    cos: tuple[float, ...] = ()
    sin: tuple[float, ...] = ()

    @property
    def degree(self) -> int:
        return max(len(self.cos), len(self.sin))

    def padded(self) -> tuple[np.ndarray, np.ndarray]:
        n = self.degree
        a = np.zeros(n)
        b = np.zeros(n)
        a[: len(self.cos)] = self.cos
        b[: len(self.sin)] = self.sin
        return a, b

    def __call__(self, theta) -> np.ndarray:
        a, b = self.padded()
        theta = np.asarray(theta, dtype=float)
        n = np.arange(1, self.degree + 1)
        phase = theta[..., None] * n
        return self.constant + np.sum(a * np.cos(phase) + b * np.sin(phase), axis=-1)


@dataclass(frozen=True)
class HarmonicExtension:
    modes: BoundaryModes
    dtn_modes: BoundaryModes
    dirichlet_energy: float
    quadrature_energy: float

    def __call__(self, z) -> np.ndarray:
        """sum r^n (a_n cos n theta + b_n sin n theta) + c0, i.e. Re of a power series in z."""
        z = np.asarray(z, dtype=complex)
        a, b = self.modes.padded()
        coeffs = np.concatenate([[self.modes.constant], a - 1j * b])
        return np.real(np.polynomial.polynomial.polyval(z, coeffs))

    def gradient(self, z) -> tuple[np.ndarray, np.ndarray]:
        z = np.asarray(z, dtype=complex)
        a, b = self.modes.padded()
        n = np.arange(1, self.modes.degree + 1)
        deriv = np.concatenate([n * (a - 1j * b), [0.0]]) if n.size else np.zeros(1)
        d = np.polynomial.polynomial.polyval(z, deriv)
        return np.real(d), -np.imag(d)


def _energy_by_quadrature(modes: BoundaryModes, n_r: int = 64) -> float:
    n_theta = max(16, 4 * modes.degree + 4)
    r, wr = gauss_legendre(0.0, 1.0, n_r)
    t, wt = periodic_nodes(n_theta)
    z = (r[:, None] * np.exp(1j * t[None, :])).ravel()
    weights = np.outer(wr * r, wt).ravel()
    ext = HarmonicExtension(modes, modes, 0.0, 0.0)
    gx, gy = ext.gradient(z)
    return float(np.sum(weights * (gx**2 + gy**2)))


def harmonic_extension_dtn(modes: BoundaryModes) -> HarmonicExtension:
    """Extend boundary data harmonically and apply the multiplier |n|.

    The energy is computed from the modes, pi sum n (a_n^2 + b_n^2), and
    independently by quadrature of |grad u|^2 over the disk.
    """
    a, b = modes.padded()
    n = np.arange(1, modes.degree + 1)
    dtn = BoundaryModes(0.0, tuple(float(x) for x in n * a), tuple(float(x) for x in n * b))
    energy = math.pi * float(np.sum(n * (a * a + b * b)))
    return HarmonicExtension(modes, dtn, energy, _energy_by_quadrature(modes))


def dtn_pairing(modes: BoundaryModes, n: int = 512) -> float:
    """<phi, D phi> = integral over the circle of phi * (D phi) dtheta."""
    ext = harmonic_extension_dtn(modes)
    t, w = periodic_nodes(max(n, 4 * modes.degree + 4))
    return float(np.sum(w * modes(t) * ext.dtn_modes(t)))
