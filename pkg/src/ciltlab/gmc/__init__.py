from .spec import GmcRegion, GmcSpec, Weight, indicator, unit_weight
from .estimate import SCHEMES, gmc_estimate, grid_nodes, second_moment_estimate
from .moments import MomentBounds, gmc_first_moment, gmc_second_moment, l2_gap, moment_bound_quantities

__all__ = [
    "GmcRegion",
    "GmcSpec",
    "Weight",
    "indicator",
    "unit_weight",
    "SCHEMES",
    "gmc_estimate",
    "grid_nodes",
    "second_moment_estimate",
    "MomentBounds",
    "gmc_first_moment",
    "gmc_second_moment",
    "l2_gap",
    "moment_bound_quantities",
]
