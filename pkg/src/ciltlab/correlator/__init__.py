from .config import Backend, CorrelatorConfig, CorrelatorResult, term_table, zero_mode_weight
from .disk import (
    MagneticFactor,
    check_term,
    clear_base_point,
    coulomb_gas_term,
    disk_correlator,
    expansion_prefactor,
    field_moment_mc,
    fixed_factor,
    fixed_sites,
    magnetic_factor,
    mc_moment_crosscheck,
    shifted_moment_mc,
)
from .covariance import spin_angle, spin_phase, weyl_constant_rho_check, weyl_exponents
from .annulus import annulus_topological_sum, annulus_topological_weight

__all__ = [
    "Backend",
    "CorrelatorConfig",
    "CorrelatorResult",
    "term_table",
    "zero_mode_weight",
    "MagneticFactor",
    "check_term",
    "clear_base_point",
    "coulomb_gas_term",
    "disk_correlator",
    "expansion_prefactor",
    "field_moment_mc",
    "fixed_factor",
    "fixed_sites",
    "magnetic_factor",
    "mc_moment_crosscheck",
    "shifted_moment_mc",
    "spin_angle",
    "spin_phase",
    "weyl_constant_rho_check",
    "weyl_exponents",
    "annulus_topological_sum",
    "annulus_topological_weight",
]
