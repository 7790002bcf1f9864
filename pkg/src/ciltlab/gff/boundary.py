"""Free fields on the circle and half-circle from their Fourier series."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DomainError
from ..montecarlo import DEFAULT_CHUNK_SIZE, map_chunks


@dataclass(frozen=True)
class BoundaryGff:
    """Truncated series sum_n a_n (x_n cos n theta - y_n sin n theta).

    On the circle a_n = 1/sqrt(n); on the half-circle a_n = sqrt(2/n) and
    only the cosine modes are present.
    """

    kind: str
    x: np.ndarray
    y: np.ndarray

    @property
    def n_modes(self) -> int:
        return self.x.size

    @property
    def amplitudes(self) -> np.ndarray:
        return mode_amplitudes(self.kind, self.n_modes)

    def __call__(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        n = np.arange(1, self.n_modes + 1)
        phase = theta[..., None] * n
        a = self.amplitudes
        return np.sum(a * (self.x * np.cos(phase) - self.y * np.sin(phase)), axis=-1)

    def angular_mean(self) -> float:
        """Mean over [0, 2 pi), exact for the trigonometric polynomial up to rounding."""
        m = 2 * self.n_modes + 1
        return float(np.mean(self(2.0 * np.pi * np.arange(m) / m)))


def mode_amplitudes(kind: str, n_modes: int) -> np.ndarray:
    n = np.arange(1, n_modes + 1, dtype=float)
    match kind:
        case "circle":
            return 1.0 / np.sqrt(n)
        case "half_circle":
            return np.sqrt(2.0 / n)
    raise DomainError(f"boundary field kind must be circle or half_circle, got {kind!r}")


def boundary_gff_sample(kind: str, n_modes: int, seed: int) -> BoundaryGff:
    if n_modes < 1:
        raise DomainError(f"n_modes must be at least 1, got {n_modes}")
    mode_amplitudes(kind, n_modes)
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(n_modes)
    y = rng.standard_normal(n_modes) if kind == "circle" else np.zeros(n_modes)
    return BoundaryGff(kind, x, y)


def truncated_covariance(kind: str, n_modes: int, theta: float, theta_prime: float) -> float:
    n = np.arange(1, n_modes + 1, dtype=float)
    if kind == "circle":
        return float(np.sum(np.cos(n * (theta - theta_prime)) / n))
    if kind == "half_circle":
        return float(np.sum(2.0 * np.cos(n * theta) * np.cos(n * theta_prime) / n))
    raise DomainError(f"boundary field kind must be circle or half_circle, got {kind!r}")


def sample_boundary_values(
    kind: str,
    n_modes: int,
    thetas,
    n_samples: int,
    seed: int,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    threads: int | None = None,
) -> np.ndarray:
    """Values of independent series draws at fixed angles, shape (n_samples, len(thetas))."""
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    n = np.arange(1, n_modes + 1)
    a = mode_amplitudes(kind, n_modes)
    cos_basis = (a * np.cos(np.outer(thetas, n))).T
    sin_basis = (a * np.sin(np.outer(thetas, n))).T

    def draw(rng: np.random.Generator, count: int) -> np.ndarray:
        x = rng.standard_normal((count, n_modes))
        out = x @ cos_basis
        if kind == "circle":
            out -= rng.standard_normal((count, n_modes)) @ sin_basis
        return out

    return map_chunks(draw, n_samples, seed, chunk_size=chunk_size, threads=threads)
