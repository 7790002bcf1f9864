from .gamma import gamma_ratio, log_gamma
from .selberg import (
    MorrisParams,
    circle_fourier_coefficients,
    fyodorov_bouchaud,
    morris_closed_form,
    selberg_mc,
    selberg_quadrature,
)
from .gas import (
    ChargedSite,
    Phase,
    check_integrability,
    coulomb_moment,
    coulomb_quadrature,
    log_interaction,
    mixed_integral_mc,
    screening_sampler,
    site_scale,
)

__all__ = [
    "gamma_ratio",
    "log_gamma",
    "MorrisParams",
    "circle_fourier_coefficients",
    "fyodorov_bouchaud",
    "morris_closed_form",
    "selberg_mc",
    "selberg_quadrature",
    "ChargedSite",
    "Phase",
    "check_integrability",
    "coulomb_moment",
    "coulomb_quadrature",
    "log_interaction",
    "mixed_integral_mc",
    "screening_sampler",
    "site_scale",
]
