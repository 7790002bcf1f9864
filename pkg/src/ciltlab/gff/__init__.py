from .kernels import (
    CovarianceKernel,
    KernelKind,
    boundary_covariance_block,
    boundary_smoothing_radius,
    bulk_covariance_block,
    green_kernel,
    make_kernel,
    near_average,
    neumann_counterterm,
    neumann_covariance,
    on_unit_circle,
    regularized_covariance,
    regularized_variance,
)
from .sampler import FieldSample, FieldSite, Factorization, covariance_matrix, factorize, sample_field_at
from .boundary import BoundaryGff, boundary_gff_sample, mode_amplitudes, sample_boundary_values, truncated_covariance
from .dtn import BoundaryModes, HarmonicExtension, dtn_pairing, harmonic_extension_dtn
from .girsanov import (
    IdentityCheck,
    LinearFunctional,
    doubling_residual,
    girsanov_shift,
    imaginary_girsanov_check,
    real_girsanov_check,
)
from .export import export_samples_csv

__all__ = [
    "CovarianceKernel",
    "KernelKind",
    "boundary_covariance_block",
    "boundary_smoothing_radius",
    "bulk_covariance_block",
    "green_kernel",
    "make_kernel",
    "near_average",
    "neumann_counterterm",
    "neumann_covariance",
    "on_unit_circle",
    "regularized_covariance",
    "regularized_variance",
    "FieldSample",
    "FieldSite",
    "Factorization",
    "covariance_matrix",
    "factorize",
    "sample_field_at",
    "BoundaryGff",
    "boundary_gff_sample",
    "mode_amplitudes",
    "sample_boundary_values",
    "truncated_covariance",
    "BoundaryModes",
    "HarmonicExtension",
    "dtn_pairing",
    "harmonic_extension_dtn",
    "IdentityCheck",
    "LinearFunctional",
    "doubling_residual",
    "girsanov_shift",
    "imaginary_girsanov_check",
    "real_girsanov_check",
    "export_samples_csv",
]
