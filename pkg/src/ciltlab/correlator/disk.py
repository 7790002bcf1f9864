"""Disk correlation functions from the neutrality expansion.

Integrating out the zero mode keeps only the screening numbers (p, q) that
neutralize the insertions. Each term is a Coulomb-gas integral of p bulk
and q boundary screening charges against the fixed insertions, times the
factors of the magnetic harmonic form: its regularized energy, the phases
of the electric charges along its primitive and the curvature term.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from ..coulomb import (
    ChargedSite,
    Phase,
    check_integrability,
    coulomb_moment,
    coulomb_quadrature,
    log_interaction,
    screening_sampler,
    site_scale,
)
from ..errors import DomainError, NeutralityError, UnsupportedSurface
from ..geometry import SurfaceKind, disk, point_segment_distance
from ..gff import neumann_counterterm, neumann_covariance
from ..logs import get_logger
from ..montecarlo import McEstimate, map_chunks, summarize
from ..params import ChargeConfig, neutrality_defect, neutrality_solutions
from ..topology import SeparatingFamily, curvature_term, disk_form, regularized_norm, tangent_family
from .config import Backend, CorrelatorConfig, CorrelatorResult, zero_mode_weight

BASE_RADII = (0.45, 0.65, 0.3, 0.8)
BASE_ANGLES = 16
BASE_CLEARANCE = 0.05


@dataclass(frozen=True)
class MagneticFactor:
    """Weight of the magnetic form and the phase it puts on screening charges."""

    value: complex
    phase: Phase | None


def fixed_sites(charges: ChargeConfig) -> list[ChargedSite]:
    """Bulk insertions carry alpha, boundary insertions eta/2."""
    sites = [ChargedSite(c.position, c.alpha) for c in charges.bulk]
    sites += [ChargedSite(c.position, c.eta / 2.0) for c in charges.boundary]
    return sites


def fixed_factor(sites: list[ChargedSite], epsilon: float = 0.0) -> float:
    """Gaussian expectation of the normalized insertion vertices alone."""
    if not sites:
        return 1.0
    points = np.array([s.point for s in sites], dtype=complex)
    return float(np.exp(log_interaction(points, [s.charge for s in sites], epsilon)))


def clear_base_point(family: SeparatingFamily, *others: SeparatingFamily) -> complex:
    """A base point away from the punctures and the curves of ``family`` and ``others``.

    Raises:
        UnsupportedSurface: if no candidate point is clear.
    """
    surface = family.surface
    lo = surface.inner_radius if surface.kind is SurfaceKind.ANNULUS else 0.0
    segments = [pair for f in (family, *others) for pair in zip(*f.cut_segments)]
    for frac in BASE_RADII:
        r = lo + (1.0 - lo) * frac
        for k in range(BASE_ANGLES):
            z = r * cmath.exp(1j * (0.17 + 2.0 * math.pi * k / BASE_ANGLES))
            if any(abs(z - p) < BASE_CLEARANCE for p in surface.punctures):
                continue
            if any(point_segment_distance(z, complex(u), complex(v)) < BASE_CLEARANCE for u, v in segments):
                continue
            return z
    raise UnsupportedSurface("no base point clear of the separating family")


def magnetic_factor(config: CorrelatorConfig) -> MagneticFactor:
    """e^{-pi R^2 |omega|^2_reg} e^{i sum c 2 pi R I(x)} e^{-i Q R K(omega)} for the disk class of the windings.

    Every coefficient times R is an integer, so each phase is single-valued
    and computed from the winding angles of the form. Bulk insertions that
    are punctures use their tangent direction.
    """
    charges, params = config.charges, config.params
    magnetic = [c for c in charges.bulk if c.m != 0]
    if not magnetic:
        return MagneticFactor(1.0 + 0j, None)
    surface = disk([c.position for c in magnetic])
    form = disk_form(surface, [c.m for c in magnetic])
    family = tangent_family(surface, [c.tangent_angle for c in magnetic])
    base = complex(config.base) if config.base is not None else clear_base_point(family)
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
    k_term = curvature_term(form, family, base)
    value = cmath.exp(-math.pi * r * r * norm + 1j * r * angle - 1j * params.q_charge * r * k_term)
    get_logger().debug(
        "Magnetic factor", {"norm": norm, "curvature_term": k_term, "angle": angle, "base": str(base)}
    )
    beta = params.beta

    def phase(w: np.ndarray, y: np.ndarray) -> np.ndarray:
        out = np.ones(w.shape[0], dtype=complex)
        if w.size:
            turns = form.winding_angle(w.ravel(), base).reshape(w.shape)
            out = out * np.exp(1j * beta * r * np.sum(turns, axis=1))
        if y.size:
            turns = form.winding_angle(y.ravel(), base).reshape(y.shape)
            out = out * np.exp(0.5j * beta * r * np.sum(turns, axis=1))
        return out

    return MagneticFactor(value, phase)


def check_term(config: CorrelatorConfig, p: int, q: int) -> frozenset[tuple[int, int]]:
    """The neutrality set, after checking that (p, q) belongs to it.

    Raises:
        NeutralityError: if (p, q) is not admissible.
    """
    admissible = neutrality_solutions(config.params, config.charges, 1)
    if (p, q) not in admissible:
        raise NeutralityError(f"(p, q) = ({p}, {q}) is not in the neutrality set {sorted(admissible)}")
    return admissible


def _batched_root(cov: np.ndarray) -> np.ndarray:
    """Square roots L with L L^T = cov for a stack of covariance matrices."""
    try:
        return np.linalg.cholesky(cov)
    except np.linalg.LinAlgError:
        vals, vecs = np.linalg.eigh(cov)
        get_logger().debug("Covariance batch", {"min_eigenvalue": float(np.min(vals)), "fallback": "eigh"})
        return vecs * np.sqrt(np.clip(vals, 0.0, None))[:, None, :]


def field_moment_mc(
    config: CorrelatorConfig, p: int, q: int, phase: Phase | None = None, seed: int | None = None
) -> McEstimate:
    """Monte Carlo over the regularized field itself.

    Every sample draws the screening nodes, then the field jointly at the
    insertions and the nodes, and averages the product of normalized vertices
    e^{c^2 Var / 2} e^{-c^2 W / 2} e^{i c X} (Var is -log eps + W in the bulk
    and -2 log eps on the boundary).
    """
    beta = config.params.beta
    sites = fixed_sites(config.charges)
    check_integrability(p, q, beta, sites)
    seed = config.seed if seed is None else seed
    fixed = np.array([s.point for s in sites], dtype=complex)
    charges = np.concatenate([[s.charge for s in sites], [beta] * p, [beta / 2.0] * q])
    nodes = screening_sampler(p, q, beta, sites)
    epsilon = config.epsilon

    def draw(rng: np.random.Generator, n: int) -> np.ndarray:
        w, y, weight = nodes(rng, n)
        pts = np.concatenate([np.broadcast_to(fixed, (n, fixed.size)), w, y], axis=1)
        if pts.shape[1] == 0:
            return weight.astype(complex)
        eps = site_scale(pts, epsilon)
        cov = neumann_covariance(pts[:, :, None], eps[:, :, None], pts[:, None, :], eps[:, None, :])
        x = np.einsum("nij,nj->ni", _batched_root(cov), rng.standard_normal(pts.shape))
        var = np.diagonal(cov, axis1=1, axis2=2)
        log_norm = 0.5 * charges**2 * (var - neumann_counterterm(pts))
        values = np.exp(1j * x @ charges + np.sum(log_norm, axis=1)) * weight
        if phase is not None:
            values = values * phase(w, y)
        return values

    get_logger().debug("Field moment", {"p": p, "q": q, "epsilon": epsilon, "samples": config.n_samples})
    values = map_chunks(draw, config.n_samples, seed, chunk_size=config.chunk_size, threads=config.threads)
    return summarize(values, seed, epsilon=epsilon)


def shifted_moment_mc(
    config: CorrelatorConfig, p: int, q: int, phase: Phase | None = None, seed: int | None = None
) -> McEstimate:
    """Monte Carlo over the regularized field with the insertion vertices shifted out.

    By the Girsanov transform the insertion vertices e^{i c_j X_eps(z_j)}
    factor into their exact Gaussian expectation times a shift
    u(x) = i sum_j c_j E[X_eps(x) X_eps(z_j)] of the field at the screening
    nodes, which becomes prod_k exp(-c_k sum_j c_j C_eps(w_k, z_j)). Only
    the screening vertices are sampled, so the eps^{-alpha^2} blow-up of the
    insertions never enters the variance.
    """
    beta = config.params.beta
    sites = fixed_sites(config.charges)
    check_integrability(p, q, beta, sites)
    seed = config.seed if seed is None else seed
    epsilon = config.epsilon
    fixed = np.array([s.point for s in sites], dtype=complex)
    cs = np.array([s.charge for s in sites], dtype=float)
    fixed_eps = site_scale(fixed, epsilon)
    insertion = 1.0
    if sites:
        cov = neumann_covariance(fixed[:, None], fixed_eps[:, None], fixed[None, :], fixed_eps[None, :])
        var = np.diagonal(cov)
        insertion = float(np.exp(-0.5 * cs @ cov @ cs + 0.5 * np.sum(cs**2 * (var - neumann_counterterm(fixed)))))
    if p == 0 and q == 0:
        return McEstimate(insertion + 0j, 0.0, config.n_samples, seed, epsilon)
    screen = np.array([beta] * p + [beta / 2.0] * q)
    nodes = screening_sampler(p, q, beta, sites)

    def draw(rng: np.random.Generator, n: int) -> np.ndarray:
        w, y, weight = nodes(rng, n)
        pts = np.concatenate([w, y], axis=1)
        eps = site_scale(pts, epsilon)
        cov = neumann_covariance(pts[:, :, None], eps[:, :, None], pts[:, None, :], eps[:, None, :])
        x = np.einsum("nij,nj->ni", _batched_root(cov), rng.standard_normal(pts.shape))
        var = np.diagonal(cov, axis1=1, axis2=2)
        log_norm = np.sum(0.5 * screen**2 * (var - neumann_counterterm(pts)), axis=1)
        if sites:
            cross = neumann_covariance(pts[:, :, None], eps[:, :, None], fixed[None, None, :], fixed_eps[None, None, :])
            log_norm = log_norm - np.einsum("k,nkj,j->n", screen, cross, cs)
        values = np.exp(1j * x @ screen + log_norm) * weight
        if phase is not None:
            values = values * phase(w, y)
        return values

    get_logger().debug("Shifted field moment", {"p": p, "q": q, "epsilon": epsilon, "samples": config.n_samples})
    values = map_chunks(draw, config.n_samples, seed, chunk_size=config.chunk_size, threads=config.threads)
    return summarize(values, seed, epsilon=epsilon).scaled(insertion)


def _term_seed(seed: int, p: int, q: int) -> int:
    return int(np.random.SeedSequence([seed, p, q]).generate_state(1)[0])


def _deterministic_moment(
    config: CorrelatorConfig, p: int, q: int, epsilon: float, phase: Phase | None, seed: int
) -> McEstimate:
    """Screening integral times the fixed factor, by quadrature when p + q <= 1."""
    beta = config.params.beta
    sites = fixed_sites(config.charges)
    if p + q <= 1:
        value = coulomb_quadrature(p, q, beta, sites, epsilon, phase)
        est = McEstimate(complex(value), 0.0, 0, seed, epsilon or None)
    else:
        est = coulomb_moment(
            p, q, beta, sites, epsilon, config.n_samples, seed, phase, config.chunk_size, config.threads
        )
    return est.scaled(fixed_factor(sites, epsilon))


def coulomb_gas_term(config: CorrelatorConfig, p: int, q: int) -> McEstimate:
    """I(p, q): the (p, q) moment of the expansion, without its prefactor.

    The coulomb_gas backend evaluates the unregularized Coulomb-gas integral
    (quadrature for p + q <= 1, importance-sampled otherwise); the
    monte_carlo backend samples the field at scale ``config.epsilon``.

    Raises:
        NeutralityError: if (p, q) is not in the neutrality set.
        DivergenceError: if an exponent is not integrable.
    """
    check_term(config, p, q)
    magnetic = magnetic_factor(config)
    seed = _term_seed(config.seed, p, q)
    if config.backend is Backend.MONTE_CARLO:
        est = field_moment_mc(config, p, q, magnetic.phase, seed)
    else:
        est = _deterministic_moment(config, p, q, 0.0, magnetic.phase, seed)
    return est.scaled(magnetic.value)


def expansion_prefactor(config: CorrelatorConfig, p: int, q: int) -> complex:
    """(-mu)^p (-mu_b)^q / (p! q!) times the normalized zero-mode integral."""
    params = config.params
    kappa = neutrality_defect(params, config.charges, 1) + p * params.beta + q * params.beta / 2.0
    zero_mode = zero_mode_weight(kappa, params.radius) / (2.0 * math.pi * params.radius)
    return (-complex(params.mu)) ** p * (-complex(params.mu_boundary)) ** q / (math.factorial(p) * math.factorial(q)) * zero_mode


def disk_correlator(config: CorrelatorConfig) -> CorrelatorResult:
    """The disk correlation function as a sum over the neutrality set.

    Terms whose cosmological constant vanishes contribute exactly zero and
    are not evaluated. An empty neutrality set gives exactly 0.

    Raises:
        UnsupportedSurface: if the surface is not the disk.
    """
    if config.surface.kind is not SurfaceKind.DISK:
        raise UnsupportedSurface(f"disk correlators need the disk, not a {config.surface.kind.value}")
    config.validated()
    admissible = neutrality_solutions(config.params, config.charges, 1)
    logger = get_logger()
    if not admissible:
        logger.info("Correlator", {"neutrality_set": [], "value": 0.0})
        return CorrelatorResult(0j, 0.0, {}, admissible)
    per_term: dict[tuple[int, int], McEstimate] = {}
    for p, q in sorted(admissible):
        prefactor = expansion_prefactor(config, p, q)
        if prefactor == 0:
            per_term[(p, q)] = McEstimate(0j, 0.0, 0, config.seed)
            continue
        per_term[(p, q)] = coulomb_gas_term(config, p, q).scaled(prefactor)
    value = sum((complex(t.value) for t in per_term.values()), 0j)
    stderr = math.sqrt(sum(t.stderr**2 for t in per_term.values()))
    logger.info(
        "Correlator",
        {"neutrality_set": sorted(admissible), "value_re": value.real, "value_im": value.imag, "stderr": stderr},
    )
    return CorrelatorResult(value, stderr, per_term, admissible)


def mc_moment_crosscheck(config: CorrelatorConfig, p: int, q: int) -> tuple[McEstimate, McEstimate]:
    """The (p, q) moment at scale ``config.epsilon`` by two independent routes.

    The first samples the regularized field at the screening nodes after the
    Girsanov shift of the insertions; the second integrates the Gaussian out
    by hand and evaluates the resulting Coulomb-gas integral at the same
    scale (stderr 0 when it is a quadrature). Any (p, q) may be checked,
    neutral or not.

    Raises:
        DomainError: if p or q is negative.
        DivergenceError: if an exponent is not integrable.
    """
    if p < 0 or q < 0:
        raise DomainError(f"screening numbers must be nonnegative, got p = {p}, q = {q}")
    magnetic = magnetic_factor(config)
    seed = _term_seed(config.seed, p, q)
    mc = shifted_moment_mc(config, p, q, magnetic.phase, seed)
    reference = _deterministic_moment(config, p, q, config.epsilon, magnetic.phase, seed + 1)
    mc, reference = mc.scaled(magnetic.value), reference.scaled(magnetic.value)
    get_logger().info(
        "Moment cross-check",
        {"p": p, "q": q, "mc": complex(mc.value).real, "reference": complex(reference.value).real, "z": mc.z_score(reference.value)},
    )
    return mc, reference
