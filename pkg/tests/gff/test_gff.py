"""Unit tests for the free-field kernels, samplers and identities."""

import csv
import math

import numpy as np
import pytest

from ciltlab.errors import DomainError, FactorizationError, GeometryError, SingularityError
from ciltlab.gff import (
    BoundaryModes,
    FieldSite,
    KernelKind,
    LinearFunctional,
    boundary_gff_sample,
    doubling_residual,
    dtn_pairing,
    export_samples_csv,
    factorize,
    girsanov_shift,
    green_kernel,
    harmonic_extension_dtn,
    imaginary_girsanov_check,
    make_kernel,
    neumann_counterterm,
    neumann_covariance,
    real_girsanov_check,
    regularized_covariance,
    sample_boundary_values,
    sample_field_at,
    truncated_covariance,
)


class TestKernels:
    """Test cases for covariance kernels."""

    def test_neumann_interior_pair(self):
        """Test -log|x - y| - log|1 - x conj(y)| for separated points."""
        x, y = 0.3 + 0j, 0.5j
        expected = -math.log(abs(x - y)) - math.log(abs(1 - x * y.conjugate()))
        assert float(neumann_covariance(x, 0.0, y, 0.0)) == pytest.approx(expected)
        assert make_kernel("neumann_disk").evaluate(x, y) == pytest.approx(expected)

    def test_neumann_boundary_pair(self):
        """Test the doubled logarithm between boundary points."""
        assert float(neumann_covariance(1.0, 0.0, -1.0, 0.0)) == pytest.approx(-2.0 * math.log(2.0))

    def test_counterterm(self):
        """Test W(z) = -log(1 - |z|^2) inside and 0 on the circle."""
        assert float(neumann_counterterm(0.5)) == pytest.approx(-math.log(0.75))
        assert float(neumann_counterterm(1.0)) == 0.0

    def test_doubling(self):
        """Test that the Neumann kernel is the doubled Dirichlet kernel."""
        assert doubling_residual(0.3, -0.2 + 0.4j) == pytest.approx(0.0, abs=1e-12)

    def test_diagonal_is_singular(self):
        """Test that evaluating on the diagonal raises."""
        with pytest.raises(SingularityError):
            make_kernel(KernelKind.NEUMANN_DISK).evaluate(0.2, 0.2)

    def test_unknown_kernel(self):
        """Test that unknown kernel names are rejected."""
        with pytest.raises(DomainError):
            make_kernel("torus")


class TestFactorize:
    """Test cases for covariance factorization."""

    def test_semidefinite_gets_jitter(self):
        """Test that a rank-one matrix is factorized with jitter."""
        fac = factorize(np.ones((2, 2)))
        assert fac.jitter > 0.0
        assert fac.root @ fac.root.T == pytest.approx(np.ones((2, 2)), abs=1e-6)

    def test_indefinite_names_pair(self):
        """Test that an indefinite matrix reports the offending sites."""
        with pytest.raises(FactorizationError) as err:
            factorize(np.array([[1.0, 2.0], [2.0, 1.0]]))
        assert set(err.value.pair) == {0, 1}


class TestBoundaryField:
    """Test cases for the circle and half-circle series."""

    def test_truncated_variance_is_harmonic_number(self):
        """Test that the circle variance is the harmonic number."""
        assert truncated_covariance("circle", 10, 0.3, 0.3) == pytest.approx(sum(1 / n for n in range(1, 11)))

    def test_half_circle_has_no_sine_modes(self):
        """Test that half-circle draws carry cosine modes only."""
        sample = boundary_gff_sample("half_circle", 8, 3)
        assert not np.any(sample.y)
        assert sample(0.0) == pytest.approx(float(np.sum(sample.amplitudes * sample.x)))

    def test_sample_covariance(self):
        """Test the sample covariance against the truncated series."""
        values = sample_boundary_values("circle", 64, [0.0, 1.0], 40_000, 11, chunk_size=4096, threads=1)
        products = values[:, 0] * values[:, 1]
        stderr = np.std(products, ddof=1) / math.sqrt(products.size)
        assert abs(np.mean(products) - truncated_covariance("circle", 64, 0.0, 1.0)) < 5 * stderr

    def test_circle_covariance_at_lag_pi(self):
        """Test that opposite points have covariance -log 2."""
        values = sample_boundary_values("circle", 2048, [0.0, math.pi], 100_000, 17, threads=1)
        products = values[:, 0] * values[:, 1]
        stderr = np.std(products, ddof=1) / math.sqrt(products.size)
        assert abs(np.mean(products) + math.log(2.0)) < 3 * stderr

    def test_half_circle_doubles_cosine_sum(self):
        """Test that the half-circle variance at angle 0 is twice the circle variance."""
        values = sample_boundary_values("half_circle", 2048, [0.0], 100_000, 19, threads=1)
        squares = values[:, 0] ** 2
        stderr = np.std(squares, ddof=1) / math.sqrt(squares.size)
        assert abs(np.mean(squares) - 2 * truncated_covariance("circle", 2048, 0.0, 0.0)) < 3 * stderr

    def test_thread_count_does_not_change_samples(self):
        """Test that the sample set is the same for one or several workers."""
        a = sample_boundary_values("half_circle", 16, [0.5], 5000, 2, chunk_size=512, threads=1)
        b = sample_boundary_values("half_circle", 16, [0.5], 5000, 2, chunk_size=512, threads=4)
        assert np.array_equal(a, b)

    def test_bad_kind(self):
        """Test that unknown series kinds are rejected."""
        with pytest.raises(DomainError):
            truncated_covariance("segment", 4, 0.0, 0.0)


class TestDtn:
    """Test cases for the Dirichlet-to-Neumann check."""

    def test_single_mode_energy(self):
        """Test that cos(2 theta) has energy 2 pi."""
        ext = harmonic_extension_dtn(BoundaryModes(0.0, (0.0, 1.0)))
        assert ext.dirichlet_energy == pytest.approx(2 * math.pi)
        assert ext.quadrature_energy == pytest.approx(2 * math.pi, rel=1e-10)
        assert ext.dtn_modes.cos == (0.0, 2.0)

    def test_pairing_matches_energy(self):
        """Test that <phi, D phi> equals the Dirichlet energy."""
        modes = BoundaryModes(0.4, (1.0, -0.5), (0.0, 0.0, 0.3))
        assert dtn_pairing(modes) == pytest.approx(harmonic_extension_dtn(modes).dirichlet_energy, rel=1e-10)

    def test_extension_restricts_to_data(self):
        """Test that the extension equals the data on the circle."""
        modes = BoundaryModes(0.1, (0.5,), (0.25,))
        ext = harmonic_extension_dtn(modes)
        t = np.linspace(0.0, 2 * math.pi, 7)
        assert ext(np.exp(1j * t)) == pytest.approx(modes(t))


class TestGirsanov:
    """Test cases for the Gaussian identities."""

    def test_imaginary_identity(self):
        """Test E exp(iY) against exp(-Var Y / 2)."""
        kernel = make_kernel("neumann_disk")
        sites = (FieldSite(0.2 + 0j, 0.05), FieldSite(-0.3j, 0.05))
        check = imaginary_girsanov_check(kernel, sites, (1.0, -0.5), 20_000, 5)
        assert check.consistent(5.0)

    def test_real_identity(self):
        """Test the real Girsanov shift from the same samples."""
        kernel = make_kernel("neumann_disk")
        sites = (FieldSite(0.2 + 0j, 0.05), FieldSite(-0.3j, 0.05))
        check = real_girsanov_check(kernel, sites, (1.0, 0.0), (0.3, 0.2), 20_000, 6)
        assert check.consistent(5.0)

    def test_shift_is_covariance(self):
        """Test that the shift of a point functional is its covariance."""
        kernel = make_kernel("neumann_disk")
        fn = LinearFunctional(sites=(FieldSite(0.5j, 0.0),), weights=(2.0,))
        u = girsanov_shift(kernel, fn)
        assert u(0.1, 0.0) == pytest.approx(2.0 * kernel.evaluate(0.1, 0.5j))


class TestExport:
    """Test cases for sample export."""

    def test_csv_rows(self, tmp_path):
        """Test that the CSV has a header and one row per sample."""
        kernel = make_kernel("neumann_disk")
        samples = sample_field_at(kernel, (FieldSite(0.1 + 0j, 0.1),), 5, 0)
        path = export_samples_csv(samples, tmp_path / "out" / "samples.csv")
        with path.open() as f:
            rows = list(csv.reader(f))
        assert rows[0][0] == "sample"
        assert len(rows) == 6


class TestRegularizedCovariance:
    """Test cases for circle-averaged and boundary-smoothed covariances."""

    def test_green_normalization(self):
        """Test that the Green function is the covariance over 2 pi."""
        x, y = 0.3 + 0j, -0.2 + 0.4j
        kernel = make_kernel("dirichlet_disk")
        assert green_kernel("dirichlet_disk", x, y) == pytest.approx(kernel.evaluate(x, y) / (2 * math.pi))

    def test_disjoint_circles_keep_kernel(self):
        """Test that averaging over disjoint circles leaves the kernel unchanged."""
        kernel = make_kernel(KernelKind.NEUMANN_DISK)
        x, y = 0.3 + 0j, 0.5j
        assert regularized_covariance(kernel, x, 0.01, y, 0.02) == pytest.approx(kernel.evaluate(x, y), rel=1e-12)

    def test_diagonals(self):
        """Test -log eps at the centre and -2 log eps on the boundary."""
        eps = 0.01
        neumann = make_kernel(KernelKind.NEUMANN_DISK)
        assert regularized_covariance(neumann, 0j, eps, 0j, eps) == pytest.approx(-math.log(eps), rel=1e-10)
        assert regularized_covariance(neumann, 1 + 0j, eps, 1 + 0j, eps) == pytest.approx(-2 * math.log(eps), rel=1e-10)
        dirichlet = make_kernel(KernelKind.DIRICHLET_DISK)
        assert regularized_covariance(dirichlet, 0j, eps, 0j, eps) == pytest.approx(-math.log(eps), rel=1e-10)

    def test_circle_leaving_disk(self):
        """Test that an averaging circle must stay inside the disk."""
        with pytest.raises(GeometryError):
            regularized_covariance(make_kernel(KernelKind.NEUMANN_DISK), 0.95 + 0j, 0.1, 0j, 0.1)
