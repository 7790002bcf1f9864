"""Unit tests for harmonic forms, separating families and the curvature term."""

import math

import numpy as np
import pytest

from ciltlab.correlator import clear_base_point
from ciltlab.errors import DomainError, GeometryError, PathError
from ciltlab.geometry import annulus, disk, make_factor
from ciltlab.topology import (
    ExactForm,
    annulus_form,
    anomaly,
    anomaly_step,
    base_point_change,
    cohomology_lattice,
    conformal_shift,
    curvature_term,
    describe_family,
    disk_form,
    dual_cycle_integrals,
    lattice_offset,
    metric_pairing,
    parse_family,
    primitive,
    primitive_jump,
    radial_family,
    random_family,
    regularized_norm,
    reroute_to_puncture,
    rotate_tangent,
    tangent_family,
    theta_sum,
)


class TestForms:
    """Test cases for harmonic pole forms."""

    def test_disk_form_windings(self):
        """Test that a centred puncture carries its winding and no image."""
        form = disk_form(disk([0j]), [2])
        assert form.windings == (2.0,)
        assert form.poles.size == 1
        assert form.circle_cycle(0.5) == pytest.approx(2.0)

    def test_off_centre_image(self):
        """Test that an off-centre puncture gets a reflected image pole."""
        form = disk_form(disk([0.5]), [1])
        assert form.poles == pytest.approx(np.array([0.5, 2.0]))
        assert list(form.residues) == [1.0, -1.0]

    def test_annulus_inner_cycle(self):
        """Test that the inner cycle of the k-th representative is k."""
        form = annulus_form(annulus(0.4), [], 3)
        assert form.circle_cycle(0.7) == pytest.approx(3.0)

    def test_winding_angle_at_base(self):
        """Test that the winding angle vanishes at the base point."""
        form = disk_form(disk([0.5]), [1])
        assert form.winding_angle(np.array([0.1j]), 0.1j)[0] == pytest.approx(0.0)

    def test_winding_angle_on_pole_needs_direction(self):
        """Test that a point on a pole needs an approach direction."""
        form = disk_form(disk([0.5]), [1])
        with pytest.raises(PathError):
            form.winding_angle(np.array([0.5 + 0j]), 0.1j)
        angle = form.winding_angle(np.array([0.5 + 0j]), 0.1j, np.array([0.0]))
        assert np.isfinite(angle[0])


class TestNorms:
    """Test cases for regularized norms and lattice sums."""

    def test_centred_puncture_has_zero_norm(self):
        """Test that the counterterm cancels the centred logarithm."""
        assert regularized_norm(disk_form(disk([0j]), [1])) == pytest.approx(0.0, abs=1e-6)

    def test_inner_cycle_energy(self):
        """Test the energy log(1/r)/(2 pi) of the unit inner cycle."""
        r = 0.4
        assert regularized_norm(annulus_form(annulus(r), [], 1)) == pytest.approx(math.log(1 / r) / (2 * math.pi), rel=1e-8)

    def test_constant_metric_shift(self):
        """Test that a constant factor moves the norm by the conformal shift."""
        form = disk_form(disk([0.3]), [2])
        rho = make_factor("constant", c=0.7)
        assert conformal_shift(form, rho) == pytest.approx(4 * 0.7 / (4 * math.pi))
        shifted = regularized_norm(form, rho) - regularized_norm(form)
        assert shifted == pytest.approx(conformal_shift(form, rho), abs=1e-6)

    def test_theta_sum_without_punctures(self):
        """Test the Jacobi theta value sum exp(-2 k^2)."""
        value = theta_sum(annulus(math.exp(-1.0)), [], 4 * math.pi)
        expected = sum(math.exp(-2.0 * k * k) for k in range(-10, 11))
        assert value == pytest.approx(expected, rel=1e-9)

    def test_theta_sum_on_empty_disk(self):
        """Test that the single class of the empty disk has weight one."""
        assert theta_sum(disk(), [], 1.0) == pytest.approx(1.0)

    def test_theta_sum_rejects_bad_weight(self):
        """Test that a nonpositive weight is rejected."""
        with pytest.raises(DomainError):
            theta_sum(disk(), [], 0.0)

    def test_lattice_rank(self):
        """Test the lattice ranks of the disk and annulus."""
        assert cohomology_lattice(disk([0.2]), [1]).rank == 0
        assert cohomology_lattice(annulus(0.3, [0.6]), [1]).rank == 1
        with pytest.raises(DomainError):
            cohomology_lattice(disk([0.2]), [1, 2])


class TestFamilies:
    """Test cases for separating families and their moves."""

    def test_radial_tangents(self):
        """Test that radial families have radial tangent lines."""
        family = radial_family(disk([0.5j]))
        assert family.tangents[0] == pytest.approx(math.pi / 2)

    def test_rotation_limit(self):
        """Test that rotations beyond pi/2 are rejected."""
        family = radial_family(disk([0.5]))
        with pytest.raises(GeometryError):
            rotate_tangent(family, 0, 2.0)

    @pytest.mark.parametrize("surface", [disk([0.5]), annulus(0.2, [0.7, 0.7j])])
    def test_rotation_keeps_first_segment(self, surface):
        """Test that a rotated family is valid and still passes through the old first segment."""
        family = radial_family(surface)
        rotated = rotate_tangent(family, 0, 0.3)
        assert rotated.tangents[0] == pytest.approx(family.tangents[0] + 0.3)
        z = surface.punctures[0]
        vertices = rotated.curves[0].vertices()
        assert len(vertices) == 4
        assert vertices[2] == pytest.approx(z + 0.6 * (z / abs(z) - z))

    def test_tangent_family(self):
        """Test that requested tangent angles are reached modulo pi."""
        family = tangent_family(disk([0.5, -0.4j]), [0.3, -math.pi / 2 + 0.2])
        assert family.tangents[0] == pytest.approx(0.3)
        assert family.tangents[1] == pytest.approx(-math.pi / 2 + 0.2)

    def test_random_family_needs_annulus(self):
        """Test that random families are annulus-only."""
        with pytest.raises(GeometryError):
            random_family(disk([0.5]), np.random.default_rng(0))


class TestAnomaly:
    """Test cases for the curvature anomaly."""

    def test_lattice_offset(self):
        """Test the distance to the nearest multiple of pi."""
        assert lattice_offset(3 * math.pi + 1e-3) == pytest.approx(1e-3)
        assert lattice_offset(-math.pi) == pytest.approx(0.0)

    def test_random_families_differ_by_multiples_of_pi(self):
        """Test that the anomaly between random families lies in pi Z."""
        surface = annulus(0.3, [0.6, -0.5 + 0.2j])
        rng = np.random.default_rng(7)
        for k in (0, 1):
            form = annulus_form(surface, [1, -2], k)
            for _ in range(10):
                a, b = random_family(surface, rng), random_family(surface, rng)
                base = clear_base_point(a, b)
                value = anomaly(form, a, b, base)
                assert anomaly_step(a) == pytest.approx(math.pi)
                assert lattice_offset(value, math.pi) < 1e-6

    @pytest.mark.parametrize("windings", [[1, -2], [2, 1], [-1, 0]])
    def test_reroute_shifts_by_two_pi_winding(self, windings):
        """Test that joining the first puncture to the second changes K by 2 pi m_1."""
        surface = annulus(0.2, [0.7, 0.7j])
        radial = radial_family(surface)
        rerouted = reroute_to_puncture(radial, 0, 1, 0.45)
        form = annulus_form(surface, windings, 0)
        value = anomaly(form, radial, rerouted, clear_base_point(radial, rerouted))
        assert value == pytest.approx(2 * math.pi * windings[0], abs=1e-6)

    def test_reroute_clockwise_target(self):
        """Test that a clockwise target flips the sign of the shift."""
        surface = annulus(0.2, [0.7, -0.7j])
        radial = radial_family(surface)
        rerouted = reroute_to_puncture(radial, 0, 1, 0.45)
        form = annulus_form(surface, [2, 1], 0)
        value = anomaly(form, radial, rerouted, clear_base_point(radial, rerouted))
        assert value == pytest.approx(-4 * math.pi, abs=1e-6)

    def test_tangent_rotation_is_spin(self):
        """Test that turning the tangent line at a puncture by theta changes K by theta m."""
        surface = annulus(0.2, [0.7, 0.7j])
        radial = radial_family(surface)
        rotated = rotate_tangent(radial, 0, 0.3)
        form = annulus_form(surface, [2, -1], 0)
        value = anomaly(form, radial, rotated, clear_base_point(radial, rotated))
        assert value == pytest.approx(0.6, abs=1e-6)


def _linear_form(surface):
    return ExactForm(surface, lambda z: z.real, lambda z: (np.ones(z.shape), np.zeros(z.shape)))


class TestPrimitive:
    """Test cases for primitives and dual cycles."""

    def test_exact_primitive(self):
        """Test that the primitive of dx is x minus its base value."""
        family = radial_family(disk([0.5]))
        base = clear_base_point(family)
        points = [0.2j, -0.6 + 0.1j, 0.7 - 0.3j]
        values = primitive(_linear_form(family.surface), family, base, points)
        assert values == pytest.approx([p.real - base.real for p in points], abs=1e-10)

    def test_jump_matches_dual_cycle(self):
        """Test that the jump across a curve is the dual cycle integral."""
        surface = disk([0.5])
        family = radial_family(surface)
        form = disk_form(surface, [1])
        base = clear_base_point(family)
        dual = dual_cycle_integrals(form, family)
        assert dual == pytest.approx([-1.0])
        assert primitive_jump(form, family, base, 0) == pytest.approx(dual[0], abs=1e-10)

    def test_exact_curvature_term(self):
        """Test K of dx on the flat disk against -2 pi x0."""
        family = radial_family(disk([0.5]))
        base = clear_base_point(family)
        value = curvature_term(_linear_form(family.surface), family, base)
        assert value == pytest.approx(-2 * math.pi * base.real, abs=1e-8)

    def test_base_point_change(self):
        """Test that moving the base point shifts K by the predicted amount."""
        family = radial_family(disk([0.5]))
        form = disk_form(family.surface, [1])
        base, new_base = clear_base_point(family), -0.3 + 0.4j
        shift = curvature_term(form, family, new_base) - curvature_term(form, family, base)
        assert shift == pytest.approx(base_point_change(form, family, base, new_base), abs=1e-6)
        assert base_point_change(form, family, base, base) == pytest.approx(0.0, abs=1e-12)

    def test_metric_change_is_half_pairing(self):
        """Test that a harmonic conformal factor moves K by half the pairing with d rho."""
        family = radial_family(disk([0.5]))
        form = disk_form(family.surface, [1])
        base = clear_base_point(family)
        rho = make_factor("harmonic", coefficients=(0.0, 0.3, 0.2j))
        shift = curvature_term(form, family, base, rho) - curvature_term(form, family, base)
        assert shift == pytest.approx(0.5 * metric_pairing(form, rho), abs=1e-6)

    def test_constant_factor_has_no_pairing(self):
        """Test that a constant factor pairs to zero and leaves K unchanged."""
        family = radial_family(disk([0.5]))
        form = disk_form(family.surface, [1])
        base = clear_base_point(family)
        rho = make_factor("constant", c=0.4)
        assert metric_pairing(form, rho) == pytest.approx(0.0, abs=1e-12)
        assert curvature_term(form, family, base, rho) == pytest.approx(curvature_term(form, family, base), abs=1e-8)


class TestFamilyText:
    """Test cases for the plain-text family format and the reroute move."""

    def test_describe_then_parse(self):
        """Test that a described family parses back to the same curves."""
        family = radial_family(annulus(0.3, [0.6, -0.5 + 0.2j]))
        parsed = parse_family(describe_family(family))
        assert parsed.edges == family.edges
        assert parsed.tangents == pytest.approx(family.tangents)
        assert parsed.surface.inner_radius == pytest.approx(0.3)

    def test_parse_rejects_garbage(self):
        """Test that unknown records are rejected."""
        with pytest.raises(GeometryError):
            parse_family("surface disk\nloop 1 2 3\n")

    def test_reroute_joins_punctures(self):
        """Test that rerouting replaces a boundary curve by a puncture-to-puncture curve."""
        family = radial_family(disk([0.5, 0.5j]))
        rerouted = reroute_to_puncture(family, 0, 1, 0.3)
        assert rerouted.edges == (("z0", "z1"), ("z1", "outer"))
        with pytest.raises(GeometryError):
            reroute_to_puncture(family, 0, 1, 0.6)
