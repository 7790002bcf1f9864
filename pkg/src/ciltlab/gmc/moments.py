"""Deterministic moment oracles for regularized and limiting imaginary chaos.

Singular double integrals over the disk are written in polar coordinates
about the outer point x. With a = beta^2 the radial factor t^{1-a} dt becomes
du after the substitution u = t^{2-a} / (2-a), leaving a smooth integrand for
Gauss-Legendre. Boundary pair integrals use Gauss-Jacobi nodes carrying the
|phi|^{-a/2} endpoint singularity.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np
from scipy.special import roots_jacobi

from ..errors import DivergenceError, DomainError, QuadratureError
from ..geometry import FLAT, ConformalFactor, gauss_legendre, periodic_nodes
from ..gff import boundary_smoothing_radius, near_average
from ..logs import get_logger
from .spec import GmcRegion, GmcSpec, Weight

OUTER_RADIAL = 32
OUTER_ANGULAR = 64
INNER_ANGULAR = 64
INNER_RADIAL = 32
BOUNDARY_NODES = 256
FAR_IMAGE = 0.2
LOG_SUBSTITUTION = 0.05


def _outer_nodes(support: float, n_r: int, n_theta: int) -> tuple[np.ndarray, np.ndarray]:
    r, wr = gauss_legendre(0.0, support, n_r)
    t, wt = periodic_nodes(n_theta)
    z = (r[:, None] * np.exp(1j * t[None, :])).ravel()
    return z, np.outer(wr * r, wt).ravel()


def _exit_distance(x: complex, e: np.ndarray, support: float) -> np.ndarray:
    b = np.real(np.conj(x) * e)
    return -b + np.sqrt(np.maximum(b * b + support**2 - abs(x) ** 2, 0.0))


def _radial_nodes(a: float, lo, hi, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes t in [lo, hi] and weights for integrals of g(t) t^{1-a} dt; a trailing axis of length n."""
    p = 2.0 - a
    x, w = np.polynomial.legendre.leggauss(n)
    lo, hi = np.broadcast_arrays(np.asarray(lo, dtype=float), np.asarray(hi, dtype=float))
    if p < LOG_SUBSTITUTION:
        # t = e^s, t^{1-a} dt = e^{p s} ds; needs lo > 0
        s_lo = np.log(lo)
        half = (np.log(np.maximum(hi, lo)) - s_lo) / 2.0
        s = s_lo[..., None] + half[..., None] * (x + 1.0)
        return np.exp(s), half[..., None] * w * np.exp(p * s)
    u_lo = lo**p / p
    half = (hi**p / p - u_lo) / 2.0
    u = u_lo[..., None] + half[..., None] * (x + 1.0)
    return (p * u) ** (1.0 / p), half[..., None] * w


def _apply(f: Weight, z: np.ndarray) -> np.ndarray:
    return np.asarray(f(z.ravel())).reshape(z.shape)


def _bulk_pair_integral(
    beta: float,
    f: Weight,
    g: Weight,
    support: float,
    eps_a: float,
    eps_b: float,
    rho: ConformalFactor = FLAT,
    image: bool = True,
    boundary_damping: bool = True,
    absolute: bool = False,
    n_r: int = OUTER_RADIAL,
    n_theta: int = OUTER_ANGULAR,
) -> complex:
    """Double integral of f(x) conj(g(y)) S(x) S(y) |1 - x conj(y)|^{-a} e^{a N(|x - y|)} over the support disk.

    N is the regularized near kernel (-log t in the limit), S the one-point
    factor (1 - |z|^2)^{a/2} e^{(1 - a/4) rho(z)}.
    """
    a = beta * beta
    xs, wx = _outer_nodes(support, n_r, n_theta)
    phi, wphi = periodic_nodes(INNER_ANGULAR)
    e = np.exp(1j * phi)
    c = eps_a + eps_b
    tn, twn = gauss_legendre(0.0, 1.0, INNER_RADIAL)
    if c > 0:
        near_table = np.exp(a * near_average(c * tn, eps_a, eps_b))

    def point_factor(z: np.ndarray) -> np.ndarray:
        out = np.ones(np.shape(z))
        if not rho.is_flat:
            out = out * np.exp((1.0 - a / 4.0) * _apply(rho.value, z))
        if boundary_damping:
            out = out * np.maximum(1.0 - np.abs(z) ** 2, 0.0) ** (a / 2.0)
        return out

    def smooth(fx: complex, x: complex, y: np.ndarray) -> np.ndarray:
        gy = _apply(g, y)
        if absolute:
            gy = np.abs(gy)
        out = fx * np.conj(gy) * point_factor(y)
        if image:
            out = out * np.abs(1.0 - x * np.conj(y)) ** (-a)
        return out

    fxs = np.asarray(f(xs))
    if absolute:
        fxs = np.abs(fxs)
    sx = point_factor(xs)
    total = 0j
    for x, w, fx, s in zip(xs, wx, fxs, sx):
        if fx == 0:
            continue
        R = _exit_distance(x, e, support)
        inner = 0j
        lo = 0.0
        if c > 0:
            cut = np.minimum(R, c)
            t = cut[:, None] * tn[None, :]
            kernel = np.broadcast_to(near_table, t.shape).copy()
            short = cut < c
            if np.any(short):
                kernel[short] = np.exp(a * near_average(t[short].ravel(), eps_a, eps_b)).reshape(t[short].shape)
            y = x + t * e[:, None]
            inner += np.sum(wphi[:, None] * cut[:, None] * twn[None, :] * t * kernel * smooth(fx, x, y))
            lo = c
        t, tw = _radial_nodes(a, lo, np.maximum(R, lo), INNER_RADIAL)
        y = x + t * e[:, None]
        inner += np.sum(wphi[:, None] * tw * smooth(fx, x, y))
        total += w * s * inner
    if not np.isfinite(total):
        raise QuadratureError("non-finite value in the bulk pair integral")
    return complex(total)


def _boundary_pair_integral(beta: float, f: Weight, g: Weight, r2: float | None, absolute: bool = False) -> complex:
    """Double integral over the circle of f(x) conj(g(y)) |x - y|^{-a/2} (limit) or |1 - r2 x conj(y)|^{-a/2}."""
    a = beta * beta / 2.0
    theta, wtheta = periodic_nodes(BOUNDARY_NODES)
    x = np.exp(1j * theta)
    fx = np.asarray(f(x))
    if absolute:
        fx = np.abs(fx)
    if r2 is None:
        u, wu = roots_jacobi(BOUNDARY_NODES // 2, 0.0, -a)
        phi = math.pi * (1.0 + u) / 2.0
        wphi = wu * (math.pi / 2.0) ** (1.0 - a)
        # |2 sin(phi/2)|^{-a} = phi^{-a} (2 sin(phi/2) / phi)^{-a}
        kernel = (2.0 * np.sin(phi / 2.0) / phi) ** (-a)
    else:
        edges = [0.0]
        step = (1.0 - r2) / 4.0
        while step < math.pi:
            edges.append(step)
            step *= 2.0
        edges.append(math.pi)
        parts = [gauss_legendre(lo, hi, 16) for lo, hi in zip(edges, edges[1:])]
        phi = np.concatenate([p[0] for p in parts])
        wphi = np.concatenate([p[1] for p in parts])
        kernel = np.abs(1.0 - r2 * np.exp(1j * phi)) ** (-a)
    total = 0j
    for sign in (1.0, -1.0):
        y = x[:, None] * np.exp(1j * sign * phi[None, :])
        gy = _apply(g, y)
        if absolute:
            gy = np.abs(gy)
        total += np.sum(wtheta[:, None] * fx[:, None] * np.conj(gy) * wphi[None, :] * kernel[None, :])
    return complex(total)


def gmc_first_moment(spec: GmcSpec, n: int = 64) -> complex:
    """E of the regularized chaos: int f (1 - |x|^2)^{beta^2/2} dv (bulk) or int f dl (boundary).

    Exact for every eps because the circle-averaged diagonal is -log eps + W.
    """
    if spec.region is GmcRegion.BOUNDARY:
        t, w = periodic_nodes(4 * n)
        return complex(np.sum(w * spec.weight(np.exp(1j * t))))
    z, w = _outer_nodes(spec.support, n, 2 * n)
    return complex(np.sum(w * spec.weight(z) * (1.0 - np.abs(z) ** 2) ** (spec.beta**2 / 2.0)))


def _check_limit(spec: GmcSpec) -> None:
    exponent = spec.beta**2 if spec.region is GmcRegion.BULK else spec.beta**2 / 2.0
    dimension = 2.0 if spec.region is GmcRegion.BULK else 1.0
    if exponent >= dimension:
        raise DivergenceError(
            f"the {spec.region.value} pair kernel |x - y|^-{exponent:g} is not integrable; no L2 limit",
            exponent=exponent,
        )


def _pair(spec: GmcSpec, eps_a: float, eps_b: float, rho: ConformalFactor = FLAT) -> complex:
    if eps_a == 0.0 or eps_b == 0.0:
        _check_limit(spec)
    if spec.region is GmcRegion.BULK:
        return _bulk_pair_integral(spec.beta, spec.weight, spec.weight, spec.support, eps_a, eps_b, rho)
    if not rho.is_flat:
        raise DomainError("metric changes are supported for bulk chaos only")
    if eps_a == 0.0 and eps_b == 0.0:
        return _boundary_pair_integral(spec.beta, spec.weight, spec.weight, None)
    ra = boundary_smoothing_radius(eps_a) if eps_a > 0 else 1.0
    rb = boundary_smoothing_radius(eps_b) if eps_b > 0 else 1.0
    return _boundary_pair_integral(spec.beta, spec.weight, spec.weight, ra * rb)


def gmc_second_moment(spec: GmcSpec, limit: bool = True, rho: ConformalFactor = FLAT) -> float:
    """E|M|^2 for the chaos of ``spec``: the eps -> 0 kernel, or the eps-regularized one.

    Under the metric e^rho |dz|^2 each bulk point carries the extra weight
    e^{(1 - beta^2/4) rho}.

    Raises:
        QuadratureError: if the quadrature produces non-finite values.
    """
    eps = 0.0 if limit else spec.epsilon
    value = _pair(spec, eps, eps, rho)
    get_logger().debug("GMC second moment", {**spec.to_dict(), "limit": limit, "value": value.real})
    return value.real


def l2_gap(spec: GmcSpec, eps_a: float, eps_b: float) -> float:
    """E|M_{eps_a} - M_{eps_b}|^2 from the three pair integrals."""
    if eps_a <= 0 or eps_b <= 0:
        raise DomainError(f"both scales must be positive, got {eps_a}, {eps_b}")
    if eps_a == eps_b:
        return 0.0
    aa = _pair(spec, eps_a, eps_a).real
    bb = _pair(spec, eps_b, eps_b).real
    ab = _pair(spec, eps_a, eps_b).real
    gap = aa + bb - 2.0 * ab
    get_logger().debug("GMC L2 gap", {**spec.to_dict(), "eps_a": eps_a, "eps_b": eps_b, "gap": gap})
    return gap


class MomentBounds(NamedTuple):
    U1: float
    U2: float
    V: float


def _image_term(beta: float, f: Weight, support: float) -> float:
    """Double integral of |f(x) f(y)| |1 - x conj(y)|^{-beta^2} over the support disk.

    For |x| above ``FAR_IMAGE`` the inner integral runs in polar coordinates
    about the reflected point 1/conj(x), where |1 - x conj(y)| = |x| |y - 1/conj(x)|.
    """
    a = beta * beta
    xs, wx = _outer_nodes(support, OUTER_RADIAL, OUTER_ANGULAR)
    fy = np.abs(np.asarray(f(xs)))
    psi, wpsi = gauss_legendre(-math.pi / 2.0, math.pi / 2.0, INNER_ANGULAR)
    total = 0.0
    for x, w, fx in zip(xs, wx, fy):
        if fx == 0.0:
            continue
        if abs(x) < FAR_IMAGE:
            total += w * fx * float(np.sum(wx * fy * np.abs(1.0 - x * np.conj(xs)) ** (-a)))
            continue
        star = 1.0 / np.conj(x)
        d = abs(star)
        centre = math.atan2(-star.imag, -star.real)
        half = math.asin(min(1.0, support / d))
        phi = centre + half * np.sin(psi)
        dphi = wpsi * half * np.cos(psi)
        e = np.exp(1j * phi)
        b = np.real(np.conj(star) * e)
        disc = np.sqrt(np.maximum(b * b - d * d + support**2, 0.0))
        t, tw = _radial_nodes(a, -b - disc, -b + disc, INNER_RADIAL)
        y = star + t * e[:, None]
        inner = np.sum(dphi[:, None] * tw * np.abs(_apply(f, y)))
        total += w * fx * abs(x) ** (-a) * float(inner)
    return total


def _distance_term(beta: float, f: Weight, support: float) -> float:
    """int |f(x)| (1 - |x|)^{-beta^2/2} dv over the support disk."""
    a = beta * beta / 2.0
    t, wt = periodic_nodes(OUTER_ANGULAR)
    if support >= 1.0:
        u, wu = roots_jacobi(OUTER_RADIAL, -a, 0.0)
        r = (1.0 + u) / 2.0
        # (1 - r)^{-a} dr = ((1 - u)/2)^{-a} du / 2
        wr = wu * 0.5 ** (1.0 - a) * r
    else:
        r, wr = gauss_legendre(0.0, support, OUTER_RADIAL)
        wr = wr * r * (1.0 - r) ** (-a)
    z = r[:, None] * np.exp(1j * t[None, :])
    values = np.abs(_apply(f, z))
    return float(np.sum(wr[:, None] * wt[None, :] * values))


def moment_bound_quantities(
    bulk_weight: Weight | None,
    boundary_weight: Weight | None,
    beta: float,
    support: float = 1.0,
) -> MomentBounds:
    """Raw (U1, U2, V) bounding the exponential moments of imaginary chaos.

    U1 pairs bulk points through |x - y|^{-beta^2} and the image proxy
    |1 - x conj(y)|^{-beta^2}; U2 pairs boundary points through
    |x - y|^{-beta^2/2}; V weighs the bulk by the boundary distance to the
    power -beta^2/2 and adds the boundary mass.

    Raises:
        DivergenceError: if one of the integrals is not absolutely convergent.
    """
    a = beta * beta
    u1 = u2 = v = 0.0
    if bulk_weight is not None:
        if a >= 2.0:
            raise DivergenceError(f"bulk pair exponent beta^2 = {a} is not integrable in two dimensions", exponent=a)
        direct = _bulk_pair_integral(
            beta, bulk_weight, bulk_weight, support, 0.0, 0.0, image=False, boundary_damping=False, absolute=True
        ).real
        u1 = direct + _image_term(beta, bulk_weight, support)
        v = _distance_term(beta, bulk_weight, support)
    if boundary_weight is not None:
        if a / 2.0 >= 1.0:
            raise DivergenceError(
                f"boundary pair exponent beta^2/2 = {a / 2} is not integrable on a curve", exponent=a / 2
            )
        u2 = _boundary_pair_integral(beta, boundary_weight, boundary_weight, None, absolute=True).real
        t, w = periodic_nodes(BOUNDARY_NODES)
        v += float(np.sum(w * np.abs(boundary_weight(np.exp(1j * t)))))
    get_logger().debug("Moment bound quantities", {"beta": beta, "U1": u1, "U2": u2, "V": v})
    return MomentBounds(u1, u2, v)
