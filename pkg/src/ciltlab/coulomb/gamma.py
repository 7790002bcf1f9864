"""Lanczos log-gamma for the Gamma products of the structure constants."""

from __future__ import annotations

import math

from ..errors import DomainError

_G = 7.0
_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_TWO_PI = 0.5 * math.log(2.0 * math.pi)


def log_gamma(x: float) -> float:
    """log Gamma(x) for x > 0.

    Raises:
        DomainError: for x <= 0.
    """
    x = float(x)
    if not x > 0.0:
        raise DomainError(f"log_gamma needs x > 0, got {x}")
    if x < 0.5:
        return log_gamma(x + 1.0) - math.log(x)
    x -= 1.0
    series = _COEFFS[0]
    for i, c in enumerate(_COEFFS[1:], start=1):
        series += c / (x + i)
    t = x + _G + 0.5
    return _HALF_LOG_TWO_PI + (x + 0.5) * math.log(t) - t + math.log(series)


def gamma_ratio(numerator: list[float], denominator: list[float]) -> float:
    """prod Gamma(numerator) / prod Gamma(denominator), computed in log space.

    Raises:
        DomainError: if an argument is not positive.
    """
    total = math.fsum(log_gamma(x) for x in numerator) - math.fsum(log_gamma(x) for x in denominator)
    return math.exp(total)
