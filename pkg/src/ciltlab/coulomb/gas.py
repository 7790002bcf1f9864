"""Coulomb-gas integrals of screening charges against fixed insertions on the disk.

A site with coefficient c carries the vertex e^{i c X}. Gaussian integration
turns a product of normalized vertices into

    exp( -sum_{i<j} c_i c_j C(x_i, x_j) - sum_{bulk i} c_i^2 W(x_i) / 2 )

with C the Neumann disk covariance, so that pairs interact through
|x - y|^{c c'} |1 - x conj(y)|^{c c'} in the bulk and |x - y|^{2 c c'} when a
boundary point is involved. Bulk screening charges have c = beta, boundary
ones c = beta / 2.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ..errors import DivergenceError, DivergenceWarning, DomainError
from ..geometry import graded_gauss_legendre, periodic_nodes
from ..gff import neumann_counterterm, neumann_covariance, on_unit_circle
from ..logs import get_logger
from ..montecarlo import DEFAULT_CHUNK_SIZE, McEstimate, map_chunks, summarize

WARN_MARGIN = 0.05
RADIAL_DEPTH = 30
ANGULAR_DEPTH = 16
PANEL_NODES = 8
ANGLE_BLOCK = 64

Phase = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class ChargedSite:
    """A fixed insertion: ``charge`` is the coefficient of X at ``point``."""

    point: complex
    charge: float

    @property
    def on_boundary(self) -> bool:
        return bool(on_unit_circle(self.point))


def site_scale(points, epsilon: float) -> np.ndarray:
    """Regularization scale per site: eps, shrunk to half the boundary distance for interior points."""
    z = np.asarray(points, dtype=complex)
    if epsilon == 0.0:
        return np.zeros(z.shape)
    return np.where(on_unit_circle(z), epsilon, np.minimum(epsilon, (1.0 - np.abs(z)) / 2.0))


def log_interaction(points: np.ndarray, charges: Sequence[float], epsilon: float = 0.0, active=None) -> np.ndarray:
    """Log of the Gaussian vertex expectation over the trailing axis of ``points``.

    Only pairs with at least one ``active`` site and one-point terms of active
    sites are included; by default every site is active.
    """
    z = np.asarray(points, dtype=complex)
    c = np.asarray(charges, dtype=float)
    k = c.size
    act = np.ones(k, dtype=bool) if active is None else np.asarray(active, dtype=bool)
    eps = site_scale(z, epsilon)
    cov = neumann_covariance(z[..., :, None], eps[..., :, None], z[..., None, :], eps[..., None, :])
    upper = np.triu(np.ones((k, k), dtype=bool), 1) & (act[:, None] | act[None, :])
    with np.errstate(invalid="ignore"):
        pair = -np.sum(np.where(upper, np.outer(c, c) * cov, 0.0), axis=(-2, -1))
    one_point = -0.5 * np.sum(np.where(act, c * c * neumann_counterterm(z), 0.0), axis=-1)
    return pair + one_point


def _site_log_weight(w: np.ndarray, charge: float, sites: Sequence[ChargedSite], epsilon: float) -> np.ndarray:
    """log_interaction restricted to one screening site ``w`` against fixed sites."""
    out = -0.5 * charge * charge * neumann_counterterm(w)
    if sites:
        pts = np.array([s.point for s in sites], dtype=complex)
        cs = np.array([s.charge for s in sites])
        cov = neumann_covariance(w[..., None], site_scale(w, epsilon)[..., None], pts, site_scale(pts, epsilon))
        out = out - charge * np.sum(cs * cov, axis=-1)
    return out


def _exponents(p: int, q: int, beta: float, sites: Sequence[ChargedSite]) -> list[tuple[str, float, float]]:
    """(description, exponent, integrability threshold) of every singular factor."""
    out = []
    for s in sites:
        if p > 0:
            e = beta * s.charge * (2.0 if s.on_boundary else 1.0)
            out.append((f"bulk screening against {s.point}", e, -2.0))
        if q > 0 and s.on_boundary:
            out.append((f"boundary screening against {s.point}", beta * s.charge, -1.0))
    return out


def check_integrability(p: int, q: int, beta: float, sites: Sequence[ChargedSite]) -> None:
    """Raise on non-integrable exponents and warn near the threshold.

    Raises:
        DivergenceError: if a singular factor is not integrable.
    """
    for what, exponent, threshold in _exponents(p, q, beta, sites):
        if exponent <= threshold:
            raise DivergenceError(f"{what}: exponent {exponent:g} is not above {threshold:g}", exponent=exponent)
        if exponent < threshold + WARN_MARGIN:
            message = f"{what}: exponent {exponent:g} is within {WARN_MARGIN} of the integrability threshold"
            get_logger().warning("Near-divergent Coulomb integral", {"factor": what, "exponent": exponent})
            warnings.warn(message, DivergenceWarning, stacklevel=3)


def _bulk_proposal(
    rng: np.random.Generator, shape: tuple[int, int], centre: complex | None, tau: float
) -> tuple[np.ndarray, np.ndarray]:
    """Bulk nodes and importance weights for Lebesgue measure on the disk."""
    phi = rng.uniform(0.0, 2.0 * math.pi, shape)
    if centre is None:
        return np.sqrt(rng.uniform(0.0, 1.0, shape)) * np.exp(1j * phi), np.full(shape, math.pi)
    t_max = 1.0 + abs(centre)
    t = t_max * rng.uniform(0.0, 1.0, shape) ** (1.0 / (2.0 + tau))
    w = centre + t * np.exp(1j * phi)
    density = (2.0 + tau) * t**tau / (2.0 * math.pi * t_max ** (2.0 + tau))
    inside = np.abs(w) < 1.0
    w = np.where(inside, w, 0.5 * w / np.abs(w))
    return w, np.where(inside, 1.0 / density, 0.0)


def _boundary_proposal(
    rng: np.random.Generator, shape: tuple[int, int], angle: float | None, tau: float
) -> tuple[np.ndarray, np.ndarray]:
    """Boundary nodes and importance weights for arc length on the circle."""
    if angle is None:
        return np.exp(1j * rng.uniform(0.0, 2.0 * math.pi, shape)), np.full(shape, 2.0 * math.pi)
    size = math.pi * rng.uniform(0.0, 1.0, shape) ** (1.0 / (1.0 + tau))
    theta = np.where(rng.uniform(0.0, 1.0, shape) < 0.5, -size, size)
    density = (1.0 + tau) * size**tau / (2.0 * math.pi ** (1.0 + tau))
    return np.exp(1j * (angle + theta)), 1.0 / density


def _most_singular(sites: Sequence[ChargedSite], beta: float, boundary: bool) -> tuple[ChargedSite | None, float]:
    best, tau = None, 0.0
    for s in sites:
        if s.on_boundary != boundary:
            continue
        e = beta * s.charge
        if e < tau:
            best, tau = s, e
    return best, tau


def screening_sampler(
    p: int, q: int, beta: float, sites: Sequence[ChargedSite] = ()
) -> Callable[[np.random.Generator, int], tuple[np.ndarray, np.ndarray, np.ndarray]]:
    """Draws (bulk nodes, boundary nodes, importance weight) for the screening measure dw^p dtheta^q."""
    bulk_site, bulk_tau = _most_singular(sites, beta, boundary=False)
    edge_site, edge_tau = _most_singular(sites, beta, boundary=True)
    centre = bulk_site.point if bulk_site is not None else None
    angle = float(np.angle(edge_site.point)) if edge_site is not None else None

    def draw(rng: np.random.Generator, n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        w, ww = _bulk_proposal(rng, (n, p), centre, bulk_tau)
        y, wy = _boundary_proposal(rng, (n, q), angle, edge_tau)
        return w, y, np.prod(ww, axis=1) * np.prod(wy, axis=1)

    return draw


def coulomb_moment(
    p: int,
    q: int,
    beta: float,
    sites: Sequence[ChargedSite] = (),
    epsilon: float = 0.0,
    n_samples: int = 100_000,
    seed: int = 0,
    phase: Phase | None = None,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    threads: int | None = None,
) -> McEstimate:
    """Monte Carlo value of the p-bulk, q-boundary screening integral against ``sites``.

    Bulk points carry Lebesgue measure, boundary points arc length. Bulk
    nodes concentrate at the most singular bulk insertion with density
    t^{beta alpha}; boundary nodes at the most singular boundary insertion
    with density |theta|^{beta eta/2}.

    Raises:
        DivergenceError: if an exponent is not integrable.
    """
    if p < 0 or q < 0:
        raise DomainError(f"screening numbers must be nonnegative, got p = {p}, q = {q}")
    if beta <= 0:
        raise DomainError(f"beta must be positive, got {beta}")
    check_integrability(p, q, beta, sites)
    if p == 0 and q == 0:
        return McEstimate(1.0 + 0j, 0.0, n_samples, seed, epsilon or None)
    fixed = np.array([s.point for s in sites], dtype=complex)
    charges = np.concatenate([[s.charge for s in sites], [beta] * p, [beta / 2.0] * q])
    active = np.concatenate([np.zeros(len(sites), dtype=bool), np.ones(p + q, dtype=bool)])
    nodes = screening_sampler(p, q, beta, sites)

    def draw(rng: np.random.Generator, n: int) -> np.ndarray:
        w, y, weight = nodes(rng, n)
        pts = np.concatenate([np.broadcast_to(fixed, (n, fixed.size)), w, y], axis=1)
        values = np.exp(log_interaction(pts, charges, epsilon, active)) * weight
        if phase is not None:
            values = values * phase(w, y)
        return values.astype(complex)

    get_logger().debug(
        "Coulomb moment", {"p": p, "q": q, "beta": beta, "sites": len(sites), "epsilon": epsilon, "samples": n_samples}
    )
    values = map_chunks(draw, n_samples, seed, chunk_size=chunk_size, threads=threads)
    return summarize(values, seed, epsilon=epsilon or None)


def mixed_integral_mc(
    p: int,
    q: int,
    alpha: float,
    eta: float,
    beta: float,
    n_samples: int = 100_000,
    seed: int = 0,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    threads: int | None = None,
) -> McEstimate:
    """The mixed bulk-boundary Coulomb integral with charge alpha at 0 and eta at 1.

    The integrand is prod |w|^{alpha beta} |1 - w|^{eta beta} (1 - |w|^2)^{beta^2/2}
    prod |w - w'|^{beta^2} |1 - w conj(w')|^{beta^2} prod |1 - y|^{eta beta/2}
    prod |y - y'|^{beta^2/2} prod |w - y|^{beta^2}, against dw and d theta.
    """
    sites = (ChargedSite(0j, alpha), ChargedSite(1.0 + 0j, eta / 2.0))
    return coulomb_moment(p, q, beta, sites, 0.0, n_samples, seed, chunk_size=chunk_size, threads=threads)


def _breakpoint_nodes(
    breaks: list[float], period_nodes: int = 256, powers: list[float] | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Angular nodes on a full turn, graded toward every breakpoint angle.

    ``powers[i]`` is the algebraic exponent |theta - breaks[i]|^power of the
    integrand at that break; the panels touching it use a matching Jacobi rule.
    """
    if not breaks:
        return periodic_nodes(period_nodes)
    power_at: dict[float, float] = {}
    for b, e in zip(breaks, powers or [0.0] * len(breaks)):
        key = round(b % (2.0 * math.pi), 14)
        power_at[key] = power_at.get(key, 0.0) + e
    angles = sorted(power_at)
    nodes, weights = [], []
    ends = angles[1:] + [angles[0] + 2.0 * math.pi]
    for i, (lo, hi) in enumerate(zip(angles, ends)):
        hi_power = power_at[angles[(i + 1) % len(angles)]]
        x, w = graded_gauss_legendre(
            lo, hi, PANEL_NODES, ANGULAR_DEPTH, left_power=power_at[lo], right_power=hi_power
        )
        nodes.append(x)
        weights.append(w)
    return np.concatenate(nodes), np.concatenate(weights)


def _partition(w: np.ndarray, j: int, centres: np.ndarray) -> np.ndarray:
    """Smooth weight equal to 1 at centre j and vanishing quadratically at the other centres."""
    if centres.size == 1:
        return np.ones(w.shape)
    dj = np.abs(w - centres[j]) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        total = sum(dj / np.abs(w - c) ** 2 for c in centres)
    return np.where(np.isfinite(total), 1.0 / total, 0.0)


def _bulk_quadrature(
    beta: float, sites: Sequence[ChargedSite], epsilon: float, phase: Phase | None
) -> complex:
    interior = [s.point for s in sites if not s.on_boundary]
    centres = np.array(interior or [0j], dtype=complex)
    edge_points = [s.point for s in sites if s.on_boundary]
    tn, tw = graded_gauss_legendre(0.0, 1.0, PANEL_NODES, RADIAL_DEPTH)
    total = 0j
    for j, z in enumerate(centres):
        breaks = [float(np.angle(c - z)) for k, c in enumerate(centres) if k != j]
        breaks += [float(np.angle(x - z)) for x in edge_points]
        phi, wphi = _breakpoint_nodes(breaks)
        for start in range(0, phi.size, ANGLE_BLOCK):
            e = np.exp(1j * phi[start : start + ANGLE_BLOCK])
            b = np.real(np.conj(z) * e)
            R = -b + np.sqrt(b * b + 1.0 - abs(z) ** 2)
            t = R[:, None] * tn[None, :]
            w = z + t * e[:, None]
            inside = np.abs(w) < 1.0
            w = np.where(inside, w, (1.0 - 1e-12) * w / np.abs(w))
            f = np.exp(_site_log_weight(w, beta, sites, epsilon)) * _partition(w, j, centres)
            if phase is not None:
                f = f * phase(w.reshape(-1, 1), np.empty((w.size, 0), dtype=complex)).reshape(w.shape)
            weights = wphi[start : start + ANGLE_BLOCK, None] * R[:, None] * tw[None, :] * t
            total += np.sum(weights * f)
    return complex(total)


def _boundary_quadrature(
    beta: float, sites: Sequence[ChargedSite], epsilon: float, phase: Phase | None
) -> complex:
    breaks = [float(np.angle(s.point)) for s in sites]
    # |e^{i theta} - x| ~ |theta - arg x| near a boundary site; eps > 0 smooths it
    powers = [beta * s.charge if s.on_boundary and epsilon == 0.0 else 0.0 for s in sites]
    theta, wtheta = _breakpoint_nodes(breaks, period_nodes=1024, powers=powers)
    y = np.exp(1j * theta)
    f = np.exp(_site_log_weight(y, beta / 2.0, sites, epsilon))
    if phase is not None:
        f = f * phase(np.empty((y.size, 0), dtype=complex), y.reshape(-1, 1))
    return complex(np.sum(wtheta * f))


def coulomb_quadrature(
    p: int,
    q: int,
    beta: float,
    sites: Sequence[ChargedSite] = (),
    epsilon: float = 0.0,
    phase: Phase | None = None,
) -> complex:
    """Deterministic value of the single-screening integral (p + q <= 1).

    The bulk integral runs in polar coordinates about each interior insertion
    with a smooth partition of unity; radii and angles are graded toward the
    insertions, their directions and the boundary circle.

    Raises:
        DomainError: for p + q > 1.
        DivergenceError: if an exponent is not integrable.
    """
    if p + q > 1 or p < 0 or q < 0:
        raise DomainError(f"the deterministic Coulomb quadrature covers p + q <= 1, got ({p}, {q})")
    check_integrability(p, q, beta, sites)
    if p == 0 and q == 0:
        return 1.0 + 0j
    value = _bulk_quadrature(beta, sites, epsilon, phase) if p == 1 else _boundary_quadrature(beta, sites, epsilon, phase)
    get_logger().debug("Coulomb quadrature", {"p": p, "q": q, "beta": beta, "epsilon": epsilon, "value": value.real})
    return value


__all__ = [
    "ChargedSite",
    "Phase",
    "site_scale",
    "log_interaction",
    "check_integrability",
    "coulomb_moment",
    "mixed_integral_mc",
    "screening_sampler",
    "coulomb_quadrature",
]
