"""Unit tests for imaginary multiplicative chaos."""

import math

import numpy as np
import pytest

from ciltlab.errors import DivergenceError, DomainError, GeometryError
from ciltlab.gmc import (
    GmcRegion,
    GmcSpec,
    gmc_estimate,
    gmc_first_moment,
    gmc_second_moment,
    indicator,
    l2_gap,
    moment_bound_quantities,
    second_moment_estimate,
    unit_weight,
)


def _bulk(beta=0.8, epsilon=0.05, support=0.5, weight=unit_weight):
    return GmcSpec(GmcRegion.BULK, beta, epsilon, weight, support)


class TestSpec:
    """Test cases for GmcSpec."""

    def test_normalizers(self):
        """Test eps^(-beta^2/2) in the bulk and eps^(-beta^2/4) on the boundary."""
        assert _bulk(beta=1.0, epsilon=0.01).normalizer == pytest.approx(10.0)
        assert GmcSpec(GmcRegion.BOUNDARY, 1.0, 0.01).normalizer == pytest.approx(math.sqrt(10.0))

    def test_support_must_fit(self):
        """Test that averaging circles must stay inside the disk."""
        with pytest.raises(GeometryError):
            _bulk(support=0.99, epsilon=0.05)

    def test_epsilon_positive(self):
        """Test that a zero scale is rejected."""
        with pytest.raises(DomainError):
            _bulk(epsilon=0.0)

    def test_indicator(self):
        """Test the disk indicator weight."""
        w = indicator(0.3)
        assert list(w(np.array([0.1, 0.5j]))) == [1.0, 0.0]


class TestMoments:
    """Test cases for the deterministic moment oracles."""

    def test_bulk_first_moment(self):
        """Test int (1 - |x|^2)^(beta^2/2) over the disk of radius 1/2."""
        beta, s = 1.0, 0.5
        expected = math.pi * (1.0 - (1.0 - s * s) ** (1.0 + beta * beta / 2.0)) / (1.0 + beta * beta / 2.0)
        assert gmc_first_moment(_bulk(beta=beta, support=s)) == pytest.approx(expected, rel=1e-10)

    def test_boundary_first_moment(self):
        """Test that the unit boundary weight integrates to 2 pi."""
        spec = GmcSpec(GmcRegion.BOUNDARY, 0.8, 0.05)
        assert gmc_first_moment(spec) == pytest.approx(2 * math.pi)

    def test_gap_decreases(self):
        """Test that the L2 gap shrinks along a halving ladder."""
        spec = _bulk()
        first = l2_gap(spec, 0.04, 0.02)
        second = l2_gap(spec, 0.02, 0.01)
        assert 0.0 <= second < first
        assert l2_gap(spec, 0.02, 0.02) == 0.0

    def test_gap_needs_positive_scales(self):
        """Test that a zero scale is rejected by the gap."""
        with pytest.raises(DomainError):
            l2_gap(_bulk(), 0.0, 0.01)

    def test_no_limit_above_threshold(self):
        """Test that the limit second moment diverges for beta^2 >= 2."""
        with pytest.raises(DivergenceError):
            gmc_second_moment(_bulk(beta=1.5), limit=True)

    def test_bound_quantities(self):
        """Test that the moment bounds are finite and include the boundary mass."""
        bounds = moment_bound_quantities(unit_weight, unit_weight, 0.5, 0.5)
        assert all(math.isfinite(x) and x > 0 for x in bounds)
        assert bounds.V > 2 * math.pi


class TestEstimates:
    """Test cases for the Monte Carlo chaos estimators."""

    def test_bulk_first_moment_estimate(self):
        """Test the random-node estimator against the exact mean."""
        spec = _bulk()
        est = gmc_estimate(spec, 8, 4000, 1, threads=1)
        assert est.within(gmc_first_moment(spec), 5.0)
        assert est.epsilon == 0.05

    def test_boundary_first_moment_estimate(self):
        """Test the boundary estimator against 2 pi."""
        spec = GmcSpec(GmcRegion.BOUNDARY, 0.8, 0.05)
        est = gmc_estimate(spec, 8, 4000, 2, threads=1)
        assert est.within(2 * math.pi, 5.0)

    def test_second_moment_estimate(self):
        """Test the pair estimator against the regularized second moment."""
        spec = _bulk()
        est = second_moment_estimate(spec, 8, 4000, 3, threads=1)
        assert est.within(gmc_second_moment(spec, limit=False), 5.0)

    def test_fine_scale_second_moment(self):
        """Test the half-disk indicator at beta = 1 and eps = 0.005 against the pair quadrature."""
        spec = _bulk(beta=1.0, epsilon=0.005, weight=indicator(0.5))
        est = second_moment_estimate(spec, 8, 20_000, 6, threads=1)
        assert est.within(gmc_second_moment(spec, limit=False), 3.0)
        assert l2_gap(spec, 0.01, 0.005) < l2_gap(spec, 0.02, 0.01)

    def test_unknown_scheme(self):
        """Test that unknown schemes are rejected."""
        with pytest.raises(DomainError):
            gmc_estimate(_bulk(), 4, 10, 0, scheme="sobol")
