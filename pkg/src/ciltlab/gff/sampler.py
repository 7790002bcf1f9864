from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import FactorizationError
from ..logs import get_logger
from ..montecarlo import DEFAULT_CHUNK_SIZE, map_chunks
from .kernels import CovarianceKernel, regularized_covariance

NEGATIVE_TOL = 1e-9
JITTER = 1e-12


@dataclass(frozen=True)
class FieldSite:
    """An evaluation site with its regularization scale (0 for the bare field)."""

    point: complex
    eps: float = 0.0


@dataclass(frozen=True)
class Factorization:
    """Square root L of a covariance matrix, C + jitter * I = L L^T."""

    matrix: np.ndarray
    root: np.ndarray
    jitter: float = 0.0


@dataclass
class FieldSample:
    """A batch of jointly Gaussian field values, one row per sample."""

    sites: tuple[FieldSite, ...]
    values: np.ndarray
    seed: int
    kernel: CovarianceKernel
    jitter: float = 0.0
    metadata: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return self.values.shape[0]


def covariance_matrix(kernel: CovarianceKernel, sites: list[FieldSite] | tuple[FieldSite, ...]) -> np.ndarray:
    n = len(sites)
    out = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            a, b = sites[i], sites[j]
            out[i, j] = out[j, i] = regularized_covariance(kernel, a.point, a.eps, b.point, b.eps)
    return out


def _offending_pair(matrix: np.ndarray) -> tuple[int, int]:
    """The two sites carrying the most weight in the lowest eigenvector."""
    _, vectors = np.linalg.eigh(matrix)
    order = np.argsort(-np.abs(vectors[:, 0]))
    return int(order[0]), int(order[1]) if order.size > 1 else int(order[0])


def factorize(matrix: np.ndarray) -> Factorization:
    """Cholesky factor, retried with a 1e-12 * trace diagonal jitter.

    Raises:
        FactorizationError: if the matrix has an eigenvalue below
            -1e-9 * trace, or cannot be factorized even with jitter.
    """
    matrix = np.asarray(matrix, dtype=float)
    try:
        return Factorization(matrix, np.linalg.cholesky(matrix))
    except np.linalg.LinAlgError:
        pass
    trace = float(np.trace(matrix))
    lowest = float(np.linalg.eigvalsh(matrix)[0])
    if lowest < -NEGATIVE_TOL * abs(trace):
        pair = _offending_pair(matrix)
        raise FactorizationError(
            f"covariance has eigenvalue {lowest:.3e} below -{NEGATIVE_TOL:g} * trace (sites {pair[0]} and {pair[1]})",
            pair=pair,
        )
    jitter = JITTER * abs(trace)
    try:
        root = np.linalg.cholesky(matrix + jitter * np.eye(matrix.shape[0]))
    except np.linalg.LinAlgError:
        # semidefinite within tolerance: use the clipped spectral square root
        values, vectors = np.linalg.eigh(matrix)
        root = vectors * np.sqrt(np.clip(values, 0.0, None))
    get_logger().warning("Covariance jitter", {"jitter": jitter, "lowest_eigenvalue": lowest, "size": matrix.shape[0]})
    return Factorization(matrix, root, jitter)


def sample_field_at(
    kernel: CovarianceKernel,
    sites: list[FieldSite] | tuple[FieldSite, ...],
    n_samples: int,
    seed: int,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    threads: int | None = None,
) -> FieldSample:
    """Draw ``n_samples`` centred Gaussian vectors with the regularized covariance of ``sites``.

    The stream depends only on ``seed`` and ``chunk_size``.
    """
    sites = tuple(sites)
    fac = factorize(covariance_matrix(kernel, sites))

    def draw(rng: np.random.Generator, n: int) -> np.ndarray:
        return rng.standard_normal((n, len(sites))) @ fac.root.T

    values = map_chunks(draw, n_samples, seed, chunk_size=chunk_size, threads=threads)
    return FieldSample(sites, values, seed, kernel, fac.jitter)
