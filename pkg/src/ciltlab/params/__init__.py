"""Theory parameters, charge data and the exact spectral quantities.

Everything here is pure arithmetic over frozen dataclasses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from ..errors import CompactificationError, DomainError
from ..logs import get_logger

LATTICE_TOL = 1e-9
BETA_MAX = math.sqrt(2.0)
RATIONAL_DENOMINATOR = 1000


def background_charge(beta: float) -> float:
    return beta / 2.0 - 2.0 / beta


def lattice_distance(x: float, step: float) -> float:
    """Distance from ``x`` to the nearest point of ``step * Z``."""
    return abs(x - step * round(x / step))


def on_lattice(x: float, step: float, tol: float = LATTICE_TOL) -> bool:
    return lattice_distance(x, step) < tol


@dataclass(frozen=True)
class ParamSet:
    beta: float
    q_charge: float
    radius: float
    mu: complex = 0j
    mu_boundary: complex = 0j
    has_corners: bool = False
    has_boundary_potential: bool = False

    @property
    def central_charge(self) -> float:
        return 1.0 - 6.0 * self.q_charge**2

    def to_dict(self) -> dict:
        return {
            "beta": self.beta,
            "q_charge": self.q_charge,
            "radius": self.radius,
            "mu": [complex(self.mu).real, complex(self.mu).imag],
            "mu_boundary": [complex(self.mu_boundary).real, complex(self.mu_boundary).imag],
            "has_corners": self.has_corners,
            "has_boundary_potential": self.has_boundary_potential,
            "central_charge": self.central_charge,
        }


@dataclass(frozen=True)
class BulkCharge:
    position: complex
    alpha: float
    m: int = 0
    tangent_angle: float = 0.0


@dataclass(frozen=True)
class BoundaryCharge:
    position: complex
    eta: float


@dataclass(frozen=True)
class ChargeConfig:
    """Electric and magnetic insertion data plus the degree of the test functional."""

    bulk: tuple[BulkCharge, ...] = field(default_factory=tuple)
    boundary: tuple[BoundaryCharge, ...] = field(default_factory=tuple)
    extra_degree: int = 0

    @property
    def alphas(self) -> tuple[float, ...]:
        return tuple(c.alpha for c in self.bulk)

    @property
    def etas(self) -> tuple[float, ...]:
        return tuple(c.eta for c in self.boundary)

    @property
    def windings(self) -> tuple[int, ...]:
        return tuple(c.m for c in self.bulk)

    @classmethod
    def from_lists(
        cls,
        alphas: list[float] | tuple[float, ...] = (),
        positions: list[complex] | tuple[complex, ...] | None = None,
        windings: list[int] | tuple[int, ...] | None = None,
        tangents: list[float] | tuple[float, ...] | None = None,
        etas: list[float] | tuple[float, ...] = (),
        boundary_positions: list[complex] | tuple[complex, ...] | None = None,
        extra_degree: int = 0,
    ) -> "ChargeConfig":
        """Build a configuration from parallel lists.

        Missing bulk positions default to points spread on the circle of
        radius 1/2, missing boundary positions to equally spaced points of the
        unit circle starting at 1.
        """
        s = len(alphas)
        if positions is None:
            positions = [0j] if s == 1 else [0.5 * complex(math.cos(2 * math.pi * j / s), math.sin(2 * math.pi * j / s)) for j in range(s)]
        windings = windings if windings is not None else [0] * s
        tangents = tangents if tangents is not None else [0.0] * s
        if not (len(positions) == len(windings) == len(tangents) == s):
            raise DomainError("bulk charge lists have mismatched lengths")
        b = len(etas)
        if boundary_positions is None:
            boundary_positions = [complex(math.cos(2 * math.pi * j / b), math.sin(2 * math.pi * j / b)) for j in range(b)]
        if len(boundary_positions) != b:
            raise DomainError("boundary charge lists have mismatched lengths")
        bulk = tuple(BulkCharge(complex(z), float(a), int(m), float(t)) for z, a, m, t in zip(positions, alphas, windings, tangents))
        boundary = tuple(BoundaryCharge(complex(x), float(e)) for x, e in zip(boundary_positions, etas))
        return cls(bulk=bulk, boundary=boundary, extra_degree=extra_degree)


class ConformalWeights(NamedTuple):
    delta_bulk: float
    delta_boundary: float | None
    central_charge: float


def rational_regime(beta: float, tol: float = LATTICE_TOL) -> bool:
    """Whether (1/beta)Z and (1/Q)Z share a nonzero point, i.e. Q/beta is rational."""
    ratio = background_charge(beta) / beta
    approx = Fraction(ratio).limit_denominator(RATIONAL_DENOMINATOR)
    return abs(float(approx) - ratio) < tol


def validate_params(
    beta: float,
    radius: float,
    mu: complex = 0j,
    mu_boundary: complex = 0j,
    has_corners: bool = False,
    has_boundary_potential: bool | None = None,
) -> ParamSet:
    """Validate the coupling and radius and build a ``ParamSet``.

    Args:
        beta: coupling constant, must lie in (0, sqrt 2).
        radius: compactification radius, must be positive.
        mu: bulk cosmological constant.
        mu_boundary: boundary cosmological constant.
        has_corners: whether the surface has corners.
        has_boundary_potential: defaults to ``mu_boundary != 0``.

    Raises:
        DomainError: if beta or radius is out of range.
        CompactificationError: naming the violated integrality condition.
    """
    if not (0.0 < beta < BETA_MAX):
        raise DomainError(f"beta = {beta} is outside (0, sqrt(2))")
    if not radius > 0.0:
        raise DomainError(f"radius = {radius} must be positive")
    if has_boundary_potential is None:
        has_boundary_potential = complex(mu_boundary) != 0
    q = background_charge(beta)

    beta_step = 2.0 if has_boundary_potential else 1.0
    if not on_lattice(beta * radius, beta_step):
        where = "boundary potential present" if has_boundary_potential else "no boundary potential"
        raise CompactificationError(
            f"beta*radius = {beta * radius:.12g} is not in {int(beta_step)}Z ({where})"
        )
    q_step = 4.0 if has_corners else 2.0
    if not on_lattice(q * radius, q_step):
        where = "surface with corners" if has_corners else "surface without corners"
        raise CompactificationError(f"Q*radius = {q * radius:.12g} is not in {int(q_step)}Z ({where})")

    if not rational_regime(beta):
        get_logger().warning(
            "Irrational regime",
            {"beta": beta, "Q/beta": q / beta, "note": "(1/beta)Z and (1/Q)Z meet only at 0"},
        )
    return ParamSet(
        beta=beta,
        q_charge=q,
        radius=radius,
        mu=complex(mu),
        mu_boundary=complex(mu_boundary),
        has_corners=has_corners,
        has_boundary_potential=bool(has_boundary_potential),
    )


def validate_charges(params: ParamSet, charges: ChargeConfig) -> ChargeConfig:
    """Check the insertion hypotheses against ``params``.

    Raises:
        DomainError: a charge is not above Q, or positions collide.
        CompactificationError: an integrality condition fails.
    """
    q, r = params.q_charge, params.radius
    for j, c in enumerate(charges.bulk):
        if not c.alpha > q:
            raise DomainError(f"bulk charge alpha[{j}] = {c.alpha} must exceed Q = {q:.12g}")
        if not on_lattice(c.alpha * r, 1.0):
            raise CompactificationError(f"alpha[{j}]*R = {c.alpha * r:.12g} is not in Z")
    for j, c in enumerate(charges.boundary):
        if not c.eta > q:
            raise DomainError(f"boundary charge eta[{j}] = {c.eta} must exceed Q = {q:.12g}")
        if not on_lattice(c.eta * r, 2.0):
            raise CompactificationError(f"eta[{j}]*R = {c.eta * r:.12g} is not in 2Z")
    total = (sum(charges.alphas) + sum(charges.etas) / 2.0) * r
    if not on_lattice(total, 1.0):
        raise CompactificationError(f"(sum alpha + sum eta/2)*R = {total:.12g} is not in Z")
    for label, points in (("bulk", [c.position for c in charges.bulk]), ("boundary", [c.position for c in charges.boundary])):
        for i in range(len(points)):
            for j in range(i + 1, len(points)):
                if abs(points[i] - points[j]) < LATTICE_TOL:
                    raise DomainError(f"{label} positions {i} and {j} coincide at {points[i]}")
    return charges


def conformal_weights(params: ParamSet, alpha: float, m: int = 0, eta: float | None = None) -> ConformalWeights:
    q, r = params.q_charge, params.radius
    delta_bulk = (alpha / 2.0) * (alpha / 2.0 - q) + m * m * r * r / 4.0
    delta_boundary = None if eta is None else (eta / 2.0) * (eta / 2.0 - q)
    return ConformalWeights(delta_bulk, delta_boundary, params.central_charge)


def reflected_charge(params: ParamSet, alpha: float) -> float:
    """The charge 2Q - alpha, which has the same bulk weight as alpha."""
    return 2.0 * params.q_charge - alpha


def neutrality_defect(params: ParamSet, charges: ChargeConfig, euler_char: int) -> float:
    """kappa_0 = n/R + sum alpha + sum eta/2 - Q chi."""
    return (
        charges.extra_degree / params.radius
        + sum(charges.alphas)
        + sum(charges.etas) / 2.0
        - params.q_charge * euler_char
    )


def seiberg_bound_holds(params: ParamSet, charges: ChargeConfig, euler_char: int) -> bool:
    """Whether sum alpha + sum eta/2 + n/R <= Q chi (necessary for neutrality)."""
    return neutrality_defect(params, charges, euler_char) <= LATTICE_TOL


def neutrality_solutions(params: ParamSet, charges: ChargeConfig, euler_char: int) -> frozenset[tuple[int, int]]:
    """All (p, q) >= 0 with kappa_0 + p beta + q beta/2 = 0.

    The equation is 2p + q = N with N = -2 kappa_0 / beta, so the set is
    empty unless N is a nonnegative integer.
    """
    target = -2.0 * neutrality_defect(params, charges, euler_char) / params.beta
    n = round(target)
    if abs(target - n) >= LATTICE_TOL * max(1.0, abs(target)) or n < 0:
        return frozenset()
    return frozenset((p, n - 2 * p) for p in range(n // 2 + 1))


__all__ = [
    "LATTICE_TOL",
    "ParamSet",
    "BulkCharge",
    "BoundaryCharge",
    "ChargeConfig",
    "ConformalWeights",
    "background_charge",
    "lattice_distance",
    "on_lattice",
    "rational_regime",
    "validate_params",
    "validate_charges",
    "conformal_weights",
    "reflected_charge",
    "neutrality_defect",
    "seiberg_bound_holds",
    "neutrality_solutions",
]
