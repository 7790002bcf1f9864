"""Weyl and spin covariance of the disk correlator."""

from __future__ import annotations

import cmath
import math
from typing import Sequence

from ..errors import DomainError, NeutralityError
from ..logs import get_logger
from ..params import ChargeConfig, ParamSet, conformal_weights, neutrality_solutions
from .config import CorrelatorConfig

SNAP_TOL = 1e-12


def weyl_exponents(config: CorrelatorConfig, p: int, q: int, rho: float) -> tuple[float, float]:
    """Log of the (p, q) term's factor under g -> e^rho g, and the log of the predicted one.

    The first collects what the constant shift does to the screening
    measures, the insertion normalizations and the free-field measure; the
    second is c_L rho / 12 - sum Delta rho - sum Delta_eta rho / 2 plus the
    degree shift of the test functional.
    """
    params, charges = config.params, config.charges
    beta, qc, r = params.beta, params.q_charge, params.radius
    lhs = (
        -(p * beta + q * beta / 2.0) * (qc / 2.0) * rho
        - sum(c.alpha**2 / 4.0 + c.m**2 * r * r / 4.0 for c in charges.bulk) * rho
        - sum(c.eta**2 / 8.0 for c in charges.boundary) * rho
        + rho / 12.0
    )
    rhs = params.central_charge * rho / 12.0
    for c in charges.bulk:
        rhs -= conformal_weights(params, c.alpha, c.m).delta_bulk * rho
    for c in charges.boundary:
        rhs -= 0.5 * conformal_weights(params, 0.0, 0, c.eta).delta_boundary * rho
    rhs += charges.extra_degree / r * (qc / 2.0) * rho
    return lhs, rhs


def weyl_constant_rho_check(config: CorrelatorConfig, rho_const: float) -> float:
    """Largest |log LHS - log RHS| of the constant Weyl identity over the neutrality set.

    Raises:
        NeutralityError: if the configuration is not neutral.
    """
    admissible = neutrality_solutions(config.params, config.charges, 1)
    if not admissible:
        raise NeutralityError("the Weyl identity is stated for neutral configurations; the neutrality set is empty")
    residual = 0.0
    for p, q in sorted(admissible):
        lhs, rhs = weyl_exponents(config, p, q, rho_const)
        residual = max(residual, abs(lhs - rhs))
    get_logger().debug("Weyl check", {"rho": rho_const, "terms": len(admissible), "residual": residual})
    return residual


def spin_angle(charges: ChargeConfig, params: ParamSet, theta: Sequence[float]) -> float:
    """R sum (alpha_j - Q) m_j theta_j."""
    if len(theta) != len(charges.bulk):
        raise DomainError(f"{len(theta)} rotation angles given for {len(charges.bulk)} bulk insertions")
    terms = [(c.alpha - params.q_charge) * c.m * t for c, t in zip(charges.bulk, theta)]
    return params.radius * math.fsum(terms)


def spin_phase(charges: ChargeConfig, params: ParamSet, theta: Sequence[float]) -> complex:
    """Phase picked up when the tangent vector at insertion j turns by theta_j.

    Angles within ``SNAP_TOL`` of a multiple of 2 pi give exactly 1.
    """
    angle = spin_angle(charges, params, theta)
    turns = angle / (2.0 * math.pi)
    if abs(turns - round(turns)) < SNAP_TOL * max(1.0, abs(turns)):
        return 1.0 + 0j
    return cmath.exp(1j * angle)
