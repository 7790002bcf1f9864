"""Boundary Selberg and Morris integrals on the unit circle.

All integrals here use the normalized measure d theta / 2 pi per point:

    S_q(a, c) = int prod_k |1 - y_k|^{2a} prod_{j<k} |y_j - y_k|^{2c} prod dtheta_k / 2 pi
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import roots_jacobi

from ..errors import DomainError, QuadratureError
from ..logs import get_logger
from ..montecarlo import DEFAULT_CHUNK_SIZE, McEstimate, map_chunks, summarize
from .gamma import gamma_ratio

JACOBI_NODES = 256
FOURIER_TERMS = 1 << 17
FOURIER_TOL = 1e-9
INSERTION_TOL = 1e-12


@dataclass(frozen=True)
class MorrisParams:
    """q boundary points, insertion exponent 2a and pair exponent 2c."""

    q: int
    a: float
    c: float

    @classmethod
    def from_charges(cls, q: int, eta: float, beta: float) -> "MorrisParams":
        """a = eta beta / 4 and c = beta^2 / 4, the boundary screening integral of an eta insertion."""
        return cls(q, eta * beta / 4.0, beta * beta / 4.0)

    @property
    def integrable(self) -> bool:
        if self.q == 0:
            return True
        if 2.0 * self.a <= -1.0:
            return False
        if self.q >= 2 and (2.0 * self.c <= -1.0 or 2.0 * self.a + (self.q - 1) * 2.0 * self.c <= -1.0):
            return False
        return True

    def check(self) -> "MorrisParams":
        if self.q < 0:
            raise DomainError(f"the number of boundary points must be nonnegative, got {self.q}")
        if not self.integrable:
            raise DomainError(
                f"exponents 2a = {2 * self.a:g}, 2c = {2 * self.c:g} are not integrable on the circle for q = {self.q}"
            )
        return self


def morris_closed_form(params: MorrisParams) -> float:
    """prod_{j<q} Gamma(1+2a+jc) Gamma(1+(j+1)c) / (Gamma(1+a+jc)^2 Gamma(1+c)).

    Raises:
        DomainError: if a Gamma argument is not positive.
    """
    a, c = params.a, params.c
    num: list[float] = []
    den: list[float] = []
    for j in range(params.q):
        num += [1.0 + 2.0 * a + j * c, 1.0 + (j + 1) * c]
        den += [1.0 + a + j * c, 1.0 + a + j * c, 1.0 + c]
    bad = [x for x in num + den if x <= 0.0]
    if bad:
        raise DomainError(f"Gamma argument {bad[0]:g} is not positive for {params}")
    return gamma_ratio(num, den)


def fyodorov_bouchaud(q: int, beta: float) -> float:
    """Gamma(1 + q beta^2/4) / Gamma(1 + beta^2/4)^q."""
    c = beta * beta / 4.0
    return gamma_ratio([1.0 + q * c], [1.0 + c] * q)


def _angular_proposal(rng: np.random.Generator, shape: tuple[int, ...], tau: float) -> tuple[np.ndarray, np.ndarray]:
    """Offsets theta in (-pi, pi) with density proportional to |theta|^tau, and the uniform/proposal ratio."""
    if tau == 0.0:
        return rng.uniform(-math.pi, math.pi, shape), np.ones(shape)
    size = math.pi * rng.uniform(0.0, 1.0, shape) ** (1.0 / (1.0 + tau))
    theta = np.where(rng.uniform(0.0, 1.0, shape) < 0.5, -size, size)
    ratio = math.pi**tau / ((1.0 + tau) * size**tau)
    return theta, ratio


def selberg_mc(
    q: int,
    eta_exponent: float,
    pair_exponent: float,
    insertion: complex = 1.0,
    n_samples: int = 100_000,
    seed: int = 0,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    threads: int | None = None,
) -> McEstimate:
    """Monte Carlo estimate of prod |insertion - y_k|^{eta_exponent} prod |y_j - y_k|^{pair_exponent}.

    Points are uniform on the circle; for a negative insertion exponent the
    angles to the insertion are drawn from |theta|^{eta_exponent/2}.

    Raises:
        DomainError: if ``insertion`` is not on the unit circle.
    """
    params = MorrisParams(q, eta_exponent / 2.0, pair_exponent / 2.0).check()
    if abs(abs(insertion) - 1.0) > INSERTION_TOL:
        raise DomainError(f"the insertion {insertion} must lie on the unit circle")
    if q == 0:
        return McEstimate(1.0 + 0j, 0.0, n_samples, seed)
    tau = params.a if params.a < 0.0 else 0.0
    anchor = complex(insertion) / abs(insertion)
    iu, ju = np.triu_indices(q, k=1)

    def draw(rng: np.random.Generator, n: int) -> np.ndarray:
        theta, ratio = _angular_proposal(rng, (n, q), tau)
        y = anchor * np.exp(1j * theta)
        log_value = eta_exponent * np.sum(np.log(np.abs(anchor - y)), axis=1)
        if q > 1:
            log_value += pair_exponent * np.sum(np.log(np.abs(y[:, iu] - y[:, ju])), axis=1)
        return np.exp(log_value) * np.prod(ratio, axis=1)

    get_logger().debug(
        "Selberg MC",
        {"q": q, "eta_exponent": eta_exponent, "pair_exponent": pair_exponent, "angle": float(np.angle(anchor))},
    )
    values = map_chunks(draw, n_samples, seed, chunk_size=chunk_size, threads=threads)
    return summarize(values.astype(complex), seed)


def _circle_power_mean(exponent: float) -> float:
    """(1/2pi) int |2 sin(theta/2)|^exponent d theta by Gauss-Jacobi on [0, pi]."""
    u, w = roots_jacobi(JACOBI_NODES, 0.0, exponent)
    theta = math.pi * (1.0 + u) / 2.0
    smooth = (2.0 * np.sin(theta / 2.0) / theta) ** exponent
    return float(np.sum(w * smooth)) * (math.pi / 2.0) ** (1.0 + exponent) / math.pi


def circle_fourier_coefficients(a: float, n_terms: int) -> np.ndarray:
    """Coefficients c_0..c_{n-1} of |1 - e^{i theta}|^{2a} = sum_n c_n e^{i n theta}."""
    n = np.arange(n_terms - 1, dtype=float)
    ratios = (n - a) / (n + 1.0 + a)
    head = gamma_ratio([1.0 + 2.0 * a], [1.0 + a, 1.0 + a])
    return head * np.concatenate([[1.0], np.cumprod(ratios)])


def selberg_quadrature(q: int, eta_exponent: float, pair_exponent: float) -> float:
    """Deterministic value of the normalized integral for q <= 2.

    q = 1, and q = 2 without insertion weight, reduce to one Gauss-Jacobi
    integral. The general q = 2 case sums the Fourier series
    sum_n c_n(a)^2 c_n(c) of the three chord powers.

    Raises:
        DomainError: for q > 2 or non-integrable exponents.
        QuadratureError: if the Fourier tail is not below tolerance.
    """
    params = MorrisParams(q, eta_exponent / 2.0, pair_exponent / 2.0).check()
    if q == 0:
        return 1.0
    if q == 1:
        return _circle_power_mean(eta_exponent)
    if q > 2:
        raise DomainError(f"the deterministic circle quadrature covers q <= 2, got q = {q}")
    if params.a == 0.0:
        return _circle_power_mean(pair_exponent)
    ca = circle_fourier_coefficients(params.a, FOURIER_TERMS)
    cc = circle_fourier_coefficients(params.c, FOURIER_TERMS)
    terms = ca * ca * cc
    value = float(terms[0] + 2.0 * math.fsum(terms[1:]))
    decay = 3.0 + 4.0 * params.a + 2.0 * params.c
    tail = abs(terms[-1]) * FOURIER_TERMS / max(decay - 1.0, 1e-12)
    if tail > FOURIER_TOL * abs(value):
        raise QuadratureError(f"Fourier tail {tail:.2e} exceeds tolerance for a = {params.a}, c = {params.c}")
    return value
