"""Unit tests for surfaces, conformal factors and the Gauss-Bonnet audit."""

import math

import numpy as np
import pytest

from ciltlab.errors import DomainError, GeometryError, UnsupportedSurface
from ciltlab.geometry import (
    Curve,
    SurfaceKind,
    annulus,
    curvature_fields,
    curve_curvature_integral,
    disk,
    gauss_bonnet_defect,
    graded_gauss_legendre,
    half_disk,
    make_factor,
    make_surface,
    point_segment_distance,
)


class TestSurface:
    """Test cases for surface construction."""

    def test_make_surface_kinds(self):
        """Test that names map onto the matching kinds."""
        assert make_surface("disk").kind is SurfaceKind.DISK
        assert make_surface("half-disk").kind is SurfaceKind.HALF_DISK
        assert make_surface("annulus", 0.3).euler_char == 0

    def test_annulus_needs_radius(self):
        """Test that an annulus without inner radius is rejected."""
        with pytest.raises(DomainError):
            make_surface("annulus")
        with pytest.raises(DomainError):
            annulus(1.2)

    def test_unknown_kind(self):
        """Test that an unknown kind is rejected."""
        with pytest.raises(DomainError):
            make_surface("torus")

    def test_puncture_must_be_interior(self):
        """Test that boundary punctures are rejected."""
        with pytest.raises(GeometryError):
            disk([1.0])
        with pytest.raises(GeometryError):
            annulus(0.5, [0.2])

    def test_half_disk_corners(self):
        """Test the corner turning of the half-disk."""
        assert half_disk().corner_turning == pytest.approx(math.pi)

    def test_distance_to_boundary(self):
        """Test distances on the annulus."""
        assert annulus(0.5).distance_to_boundary(0.6) == pytest.approx(0.1)


class TestGaussBonnet:
    """Test cases for the Gauss-Bonnet defect."""

    @pytest.mark.parametrize(
        "surface,factor",
        [
            (disk(), make_factor("flat")),
            (disk(), make_factor("hemisphere")),
            (disk(), make_factor("bump", a=0.3)),
            (disk(), make_factor("harmonic", coefficients=(0.1, 0.2, -0.05j))),
            (half_disk(), make_factor("flat")),
            (annulus(0.4), make_factor("constant", c=0.7)),
        ],
    )
    def test_defect_vanishes(self, surface, factor):
        """Test that the defect is zero for smooth metrics."""
        assert gauss_bonnet_defect(surface, factor, 64) == pytest.approx(0.0, abs=1e-8)

    def test_order_too_small(self):
        """Test that a tiny quadrature order is rejected."""
        with pytest.raises(DomainError):
            gauss_bonnet_defect(disk(), make_factor("flat"), 2)

    def test_one_dimensional_surface(self):
        """Test that circles are rejected."""
        with pytest.raises(UnsupportedSurface):
            gauss_bonnet_defect(make_surface("circle"), make_factor("flat"), 16)


class TestHelpers:
    """Test cases for curve and quadrature helpers."""

    def test_point_segment_distance(self):
        """Test distances to the interior and ends of a segment."""
        assert point_segment_distance(0.5 + 1j, 0j, 1.0 + 0j) == pytest.approx(1.0)
        assert point_segment_distance(2.0 + 0j, 0j, 1.0 + 0j) == pytest.approx(1.0)

    def test_graded_rule_resolves_endpoint_singularity(self):
        """Test that x^(-1/2) integrates to 2 on [0, 1]."""
        x, w = graded_gauss_legendre(0.0, 1.0)
        assert float(np.sum(w / np.sqrt(x))) == pytest.approx(2.0, abs=1e-4)

    def test_jacobi_end_panel(self):
        """Test that a matched end power integrates x^(-0.9) and (1 - x)^(-0.9) to 10."""
        x, w = graded_gauss_legendre(0.0, 1.0, depth=16, left_power=-0.9)
        assert float(np.sum(w * x**-0.9)) == pytest.approx(10.0, rel=1e-8)
        x, w = graded_gauss_legendre(0.0, 1.0, depth=16, right_power=-0.9)
        assert float(np.sum(w * (1.0 - x) ** -0.9)) == pytest.approx(10.0, rel=1e-8)

    def test_unknown_factor(self):
        """Test that an unknown factor name is rejected."""
        with pytest.raises(ValueError):
            make_factor("saddle")


class TestCurvatureFields:
    """Test cases for pointwise and curve curvatures."""

    def test_hemisphere(self):
        """Test that the round hemisphere has K = 2 and a geodesic boundary."""
        rho = make_factor("hemisphere")
        assert curvature_fields(disk(), rho, 0.3 + 0.2j).K == pytest.approx(2.0, rel=1e-8)
        sample = curvature_fields(disk(), rho, 1.0 + 0j, boundary=True)
        assert sample.k == pytest.approx(0.0, abs=1e-8)

    def test_flat_boundary(self):
        """Test that the flat unit circle has k = 1 and no bulk curvature."""
        sample = curvature_fields(disk(), make_factor("flat"), 1j, boundary=True)
        assert sample.K == pytest.approx(0.0)
        assert sample.k == pytest.approx(1.0)

    def test_off_surface(self):
        """Test that points off the surface are rejected."""
        with pytest.raises(DomainError):
            curvature_fields(disk(), make_factor("flat"), 1.5)

    def test_kinked_polyline(self):
        """Test that a flat polyline turns by its kink angle."""
        curve = Curve.polyline([0j, 0.5 + 0j, 0.5 + 0.5j])
        assert curve_curvature_integral(curve, make_factor("flat")) == pytest.approx(math.pi / 2)
