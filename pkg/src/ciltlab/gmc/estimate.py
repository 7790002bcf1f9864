"""Monte Carlo estimators of regularized imaginary chaos."""

from __future__ import annotations

import math

import numpy as np

from ..errors import DomainError, ResolutionError
from ..geometry import gauss_legendre, periodic_nodes
from ..gff import bulk_covariance_block, boundary_covariance_block, factorize, make_kernel
from ..logs import get_logger
from ..montecarlo import DEFAULT_CHUNK_SIZE, McEstimate, map_chunks, summarize
from .spec import GmcRegion, GmcSpec

SCHEMES = ("random", "grid")
MAX_GRID_NODES = 4000

_NEUMANN = make_kernel("neumann_disk")


def _covariance(spec: GmcSpec, nodes: np.ndarray) -> np.ndarray:
    if spec.region is GmcRegion.BULK:
        return bulk_covariance_block(_NEUMANN, nodes, spec.epsilon)
    return boundary_covariance_block(nodes, spec.epsilon)


def _uniform_nodes(spec: GmcSpec, rng: np.random.Generator, m: int) -> np.ndarray:
    theta = rng.uniform(0.0, 2.0 * math.pi, m)
    if spec.region is GmcRegion.BULK:
        return spec.support * np.sqrt(rng.uniform(0.0, 1.0, m)) * np.exp(1j * theta)
    return np.exp(1j * theta)


def _field_at(cov: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    try:
        root = np.linalg.cholesky(cov)
    except np.linalg.LinAlgError:
        root = factorize(cov).root
    return root @ rng.standard_normal(cov.shape[0])


def _random_draws(spec: GmcSpec, m: int, rng: np.random.Generator, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Per sample: m uniform nodes and the weighted phases f eps^{-.} e^{i c X} at them."""
    nodes = np.empty((n, m), dtype=complex)
    terms = np.empty((n, m), dtype=complex)
    for k in range(n):
        z = _uniform_nodes(spec, rng, m)
        x = _field_at(_covariance(spec, z), rng)
        nodes[k] = z
        terms[k] = spec.weight(z) * spec.normalizer * np.exp(1j * spec.charge * x)
    return nodes, terms


def grid_nodes(spec: GmcSpec, quad_nodes: int) -> tuple[np.ndarray, np.ndarray]:
    """Product nodes and weights; bulk uses ``quad_nodes`` radii and twice as many angles.

    Raises:
        ResolutionError: if the node spacing exceeds eps / 2.
    """
    if spec.region is GmcRegion.BULK:
        r, wr = gauss_legendre(0.0, spec.support, quad_nodes)
        t, wt = periodic_nodes(2 * quad_nodes)
        spacing = max(np.max(np.diff(np.concatenate([[0.0], r]))), spec.support * 2.0 * math.pi / (2 * quad_nodes))
        z = (r[:, None] * np.exp(1j * t[None, :])).ravel()
        w = np.outer(wr * r, wt).ravel()
    else:
        t, w = periodic_nodes(quad_nodes)
        spacing = 2.0 * math.pi / quad_nodes
        z = np.exp(1j * t)
    if spacing > spec.epsilon / 2.0:
        raise ResolutionError(
            f"node spacing {spacing:.3e} exceeds epsilon/2 = {spec.epsilon / 2.0:.3e}; refine the grid or raise epsilon"
        )
    if z.size > MAX_GRID_NODES:
        raise ResolutionError(f"a grid of {z.size} nodes is too large for a joint factorization (limit {MAX_GRID_NODES})")
    return z, w


def gmc_estimate(
    spec: GmcSpec,
    quad_nodes: int,
    n_samples: int,
    seed: int,
    scheme: str = "random",
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    threads: int | None = None,
) -> McEstimate:
    """Estimate of the regularized chaos integral of ``spec``.

    ``random`` draws ``quad_nodes`` uniform nodes per sample together with the
    field at them, which is unbiased for the eps-regularized integral.
    ``grid`` evaluates one joint field on a fixed product grid.
    """
    if scheme not in SCHEMES:
        raise DomainError(f"unknown GMC scheme {scheme!r} (expected {' or '.join(SCHEMES)})")
    if quad_nodes < 1:
        raise DomainError(f"quad_nodes must be positive, got {quad_nodes}")
    get_logger().debug("GMC estimate", {**spec.to_dict(), "scheme": scheme, "nodes": quad_nodes, "samples": n_samples})
    if scheme == "random":

        def draw(rng: np.random.Generator, n: int) -> np.ndarray:
            _, terms = _random_draws(spec, quad_nodes, rng, n)
            return spec.measure * np.mean(terms, axis=1)

    else:
        z, w = grid_nodes(spec, quad_nodes)
        root = factorize(_covariance(spec, z)).root
        fw = w * spec.weight(z) * spec.normalizer

        def draw(rng: np.random.Generator, n: int) -> np.ndarray:
            x = rng.standard_normal((n, z.size)) @ root.T
            return np.exp(1j * spec.charge * x) @ fw

    values = map_chunks(draw, n_samples, seed, chunk_size=chunk_size, threads=threads)
    return summarize(values, seed, epsilon=spec.epsilon)


def second_moment_estimate(
    spec: GmcSpec,
    quad_nodes: int,
    n_samples: int,
    seed: int,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    threads: int | None = None,
) -> McEstimate:
    """Unbiased estimate of E|M_eps|^2 from the off-diagonal node pairs of each sample."""
    if quad_nodes < 2:
        raise DomainError("the pair estimator needs at least two nodes per sample")
    m = quad_nodes

    def draw(rng: np.random.Generator, n: int) -> np.ndarray:
        _, terms = _random_draws(spec, m, rng, n)
        total = np.sum(terms, axis=1)
        pairs = np.abs(total) ** 2 - np.sum(np.abs(terms) ** 2, axis=1)
        return spec.measure**2 * pairs / (m * (m - 1))

    values = map_chunks(draw, n_samples, seed, chunk_size=chunk_size, threads=threads)
    return summarize(values.astype(complex), seed, epsilon=spec.epsilon)
