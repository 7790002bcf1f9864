from .forms import ExactForm, Form, FormSum, PoleForm, annulus_form, disk_form, image_order, zero_form
from .family import SeparatingFamily, describe_family, dual_cycle_integrals, parse_family, vertex_cycle
from .primitive import CutSurface, primitive, primitive_jump
from .curvature_term import (
    anomaly,
    anomaly_step,
    base_point_change,
    curvature_term,
    curvature_term_parts,
    interior_cycle_term,
    lattice_offset,
)
from .norms import conformal_shift, metric_pairing, regularized_norm
from .lattice import CohomologyLattice, cohomology_lattice, theta_sum
from .moves import radial_family, random_family, reroute_to_puncture, rotate_tangent, tangent_family

__all__ = [
    "ExactForm",
    "Form",
    "FormSum",
    "PoleForm",
    "annulus_form",
    "disk_form",
    "image_order",
    "zero_form",
    "SeparatingFamily",
    "describe_family",
    "dual_cycle_integrals",
    "parse_family",
    "vertex_cycle",
    "CutSurface",
    "primitive",
    "primitive_jump",
    "anomaly",
    "anomaly_step",
    "base_point_change",
    "curvature_term",
    "curvature_term_parts",
    "interior_cycle_term",
    "lattice_offset",
    "conformal_shift",
    "metric_pairing",
    "regularized_norm",
    "CohomologyLattice",
    "cohomology_lattice",
    "theta_sum",
    "radial_family",
    "random_family",
    "reroute_to_puncture",
    "rotate_tangent",
    "tangent_family",
]
