"""Unit tests for the Selberg, Morris and Coulomb-gas integrals."""

import math

import pytest

from ciltlab.coulomb import (
    ChargedSite,
    MorrisParams,
    check_integrability,
    coulomb_moment,
    coulomb_quadrature,
    fyodorov_bouchaud,
    log_gamma,
    mixed_integral_mc,
    morris_closed_form,
    selberg_mc,
    selberg_quadrature,
)
from ciltlab.errors import DivergenceError, DomainError


class TestGamma:
    """Test cases for the Gamma helpers."""

    def test_log_gamma(self):
        """Test log Gamma at integers and one half."""
        assert log_gamma(5.0) == pytest.approx(math.log(24.0))
        assert log_gamma(0.5) == pytest.approx(0.5 * math.log(math.pi))


class TestMorris:
    """Test cases for the Morris closed form."""

    def test_single_point(self):
        """Test that the mean of |1 - e^(i theta)| is 4/pi."""
        assert morris_closed_form(MorrisParams(1, 0.5, 0.0)) == pytest.approx(4.0 / math.pi)

    def test_dyson_case(self):
        """Test the constant term Gamma(1 + 2c)/Gamma(1 + c)^2 for two points."""
        assert morris_closed_form(MorrisParams(2, 0.0, 0.5)) == pytest.approx(4.0 / math.pi)

    def test_fyodorov_bouchaud_is_morris_without_insertion(self):
        """Test that the insertion-free moment is the Morris value at a = 0."""
        beta = 0.9
        expected = morris_closed_form(MorrisParams(3, 0.0, beta * beta / 4.0))
        assert fyodorov_bouchaud(3, beta) == pytest.approx(expected)

    def test_from_charges(self):
        """Test a = eta beta/4 and c = beta^2/4."""
        params = MorrisParams.from_charges(2, -1.0, 1.0)
        assert (params.a, params.c) == (-0.25, 0.25)

    def test_not_integrable(self):
        """Test that 2a <= -1 is rejected."""
        with pytest.raises(DomainError):
            MorrisParams(1, -0.6, 0.0).check()


class TestSelberg:
    """Test cases for the circle Selberg integral."""

    def test_quadrature_single_point(self):
        """Test the q = 1 Gauss-Jacobi value."""
        assert selberg_quadrature(1, 1.0, 0.0) == pytest.approx(4.0 / math.pi, rel=1e-10)

    def test_quadrature_two_points(self):
        """Test the q = 2 Fourier sum against the closed form."""
        closed = morris_closed_form(MorrisParams(2, 0.25, 0.25))
        assert selberg_quadrature(2, 0.5, 0.5) == pytest.approx(closed, rel=1e-6)

    def test_quadrature_limited_to_two(self):
        """Test that q > 2 has no deterministic quadrature."""
        with pytest.raises(DomainError):
            selberg_quadrature(3, 0.5, 0.5)

    def test_monte_carlo(self):
        """Test the Monte Carlo estimate against the closed form."""
        params = MorrisParams(3, -0.2, 0.3)
        est = selberg_mc(3, 2 * params.a, 2 * params.c, 1.0, 20_000, 4, threads=1)
        assert est.within(morris_closed_form(params), 5.0)

    @pytest.mark.parametrize("q", [1, 2, 3])
    def test_fyodorov_bouchaud_monte_carlo(self, q):
        """Test the pure pair integral at beta = 1 against the Fyodorov-Bouchaud value."""
        est = selberg_mc(q, 0.0, 0.5, 1.0, 1_000_000, 11 + q, threads=1)
        assert est.within(fyodorov_bouchaud(q, 1.0), 3.0)

    def test_rotated_insertion(self):
        """Test that rotating the insertion point leaves the estimate unchanged."""
        base = selberg_mc(2, -0.4, 0.5, 1.0, 20_000, 5, threads=1)
        turned = selberg_mc(2, -0.4, 0.5, complex(math.cos(0.7), math.sin(0.7)), 20_000, 5, threads=1)
        assert turned.value == pytest.approx(base.value, rel=1e-9)
        assert turned.within(base.value.real, 3.0)

    def test_insertion_off_circle(self):
        """Test that an interior insertion point is rejected."""
        with pytest.raises(DomainError):
            selberg_mc(1, 0.5, 0.5, 0.5, n_samples=10)

    def test_empty_product(self):
        """Test that q = 0 is exactly one."""
        assert selberg_mc(0, 0.5, 0.5, n_samples=10).value == 1.0


class TestCoulombGas:
    """Test cases for the Coulomb-gas screening integrals."""

    def test_single_bulk_quadrature(self):
        """Test int (1 - |w|^2)^(beta^2/2) dw = pi/(1 + beta^2/2)."""
        assert coulomb_quadrature(1, 0, 1.0) == pytest.approx(2.0 * math.pi / 3.0, rel=1e-8)

    def test_single_bulk_monte_carlo(self):
        """Test the bulk Monte Carlo value against the quadrature."""
        est = coulomb_moment(1, 0, 1.0, n_samples=20_000, seed=3, threads=1)
        assert est.within(2.0 * math.pi / 3.0, 5.0)

    def test_bulk_against_insertion(self):
        """Test Monte Carlo and quadrature against a fixed bulk insertion."""
        sites = [ChargedSite(0.2 + 0.1j, -0.5)]
        quad = coulomb_quadrature(1, 0, 1.0, sites)
        est = coulomb_moment(1, 0, 1.0, sites, n_samples=20_000, seed=8, threads=1)
        assert est.within(quad, 5.0)

    def test_boundary_screening_is_morris(self):
        """Test that boundary screening against an eta insertion is (2 pi)^q times Morris."""
        beta, eta = 1.0, -1.0
        closed = (2.0 * math.pi) ** 2 * morris_closed_form(MorrisParams.from_charges(2, eta, beta))
        est = mixed_integral_mc(0, 2, 0.0, eta, beta, 20_000, 9, threads=1)
        assert est.within(closed, 5.0)

    @pytest.mark.parametrize("eta", [-1.0, -1.6, 0.8])
    def test_boundary_quadrature_is_morris(self, eta):
        """Test the single boundary quadrature against the closed form, down to exponent -0.8."""
        beta = 1.0
        sites = [ChargedSite(1.0 + 0j, eta / 2.0)]
        closed = 2.0 * math.pi * morris_closed_form(MorrisParams.from_charges(1, eta, beta))
        assert coulomb_quadrature(0, 1, beta, sites).real == pytest.approx(closed, rel=1e-8)

    def test_divergent_exponent(self):
        """Test that a non-integrable boundary exponent is rejected."""
        with pytest.raises(DivergenceError):
            check_integrability(0, 1, 1.0, [ChargedSite(1.0 + 0j, -1.25)])

    def test_negative_counts(self):
        """Test that negative screening numbers are rejected."""
        with pytest.raises(DomainError):
            coulomb_moment(-1, 0, 1.0, n_samples=10)
