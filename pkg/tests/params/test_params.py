"""Unit tests for theory parameters and charge data."""

import math

import pytest

from ciltlab.errors import CompactificationError, DomainError
from ciltlab.params import (
    ChargeConfig,
    background_charge,
    conformal_weights,
    neutrality_defect,
    neutrality_solutions,
    rational_regime,
    reflected_charge,
    seiberg_bound_holds,
    validate_charges,
    validate_params,
)


@pytest.fixture
def params():
    return validate_params(1.0, 4.0)


class TestValidateParams:
    """Test cases for validate_params."""

    def test_background_charge_and_central_charge(self, params):
        """Test Q = beta/2 - 2/beta and c = 1 - 6 Q^2."""
        assert params.q_charge == pytest.approx(-1.5)
        assert params.central_charge == pytest.approx(-12.5)
        assert background_charge(1.0) == pytest.approx(-1.5)

    def test_beta_out_of_range(self):
        """Test that beta outside (0, sqrt 2) is rejected."""
        with pytest.raises(DomainError):
            validate_params(1.5, 4.0)
        with pytest.raises(DomainError):
            validate_params(0.0, 4.0)

    def test_radius_must_be_positive(self):
        """Test that a nonpositive radius is rejected."""
        with pytest.raises(DomainError):
            validate_params(1.0, 0.0)

    def test_q_radius_integrality(self):
        """Test that Q*R outside 2Z names the violated condition."""
        with pytest.raises(CompactificationError, match="Q\\*radius"):
            validate_params(1.0, 2.0)

    def test_corners_need_4z(self):
        """Test that corners tighten Q*R to 4Z."""
        with pytest.raises(CompactificationError, match="corners"):
            validate_params(1.0, 4.0, has_corners=True)
        assert validate_params(1.0, 8.0, has_corners=True).has_corners

    def test_boundary_potential_needs_even_beta_radius(self):
        """Test that a boundary potential requires beta*R in 2Z."""
        p = validate_params(1.0, 4.0, mu_boundary=1.0)
        assert p.has_boundary_potential
        with pytest.raises(CompactificationError, match="beta\\*radius"):
            validate_params(0.5, 2.0, mu_boundary=1.0)

    def test_to_dict_splits_complex(self, params):
        """Test that to_dict reports complex constants as pairs."""
        d = validate_params(1.0, 4.0, mu=1 + 2j).to_dict()
        assert d["mu"] == [1.0, 2.0]
        assert d["radius"] == 4.0


class TestRationalRegime:
    """Test cases for rational_regime."""

    def test_rational(self):
        """Test couplings with rational beta^2."""
        assert rational_regime(1.0)
        assert rational_regime(1.0 / math.sqrt(2.0))

    def test_irrational(self):
        """Test a coupling with irrational beta^2."""
        assert not rational_regime(2.0**0.25)


class TestCharges:
    """Test cases for charge configurations."""

    def test_default_positions(self):
        """Test the default bulk and boundary positions."""
        charges = ChargeConfig.from_lists(alphas=[-1.0, -1.0], etas=[0.5])
        assert [c.position for c in charges.bulk] == pytest.approx([0.5, -0.5])
        assert charges.boundary[0].position == pytest.approx(1.0)

    def test_mismatched_lengths(self):
        """Test that mismatched parallel lists are rejected."""
        with pytest.raises(DomainError):
            ChargeConfig.from_lists(alphas=[-1.0, -1.0], windings=[1])

    def test_charge_must_exceed_q(self, params):
        """Test that alpha <= Q is rejected."""
        with pytest.raises(DomainError):
            validate_charges(params, ChargeConfig.from_lists(alphas=[-1.5]))

    def test_alpha_radius_integrality(self, params):
        """Test that alpha*R outside Z is rejected."""
        with pytest.raises(CompactificationError):
            validate_charges(params, ChargeConfig.from_lists(alphas=[-1.1]))

    def test_eta_radius_integrality(self, params):
        """Test that eta*R outside 2Z is rejected."""
        with pytest.raises(CompactificationError):
            validate_charges(params, ChargeConfig.from_lists(etas=[0.25]))

    def test_coincident_positions(self, params):
        """Test that coincident bulk positions are rejected."""
        charges = ChargeConfig.from_lists(alphas=[-1.0, -1.0], positions=[0.2j, 0.2j])
        with pytest.raises(DomainError):
            validate_charges(params, charges)


class TestWeightsAndNeutrality:
    """Test cases for conformal weights and the neutrality set."""

    def test_bulk_weight(self, params):
        """Test Delta = (alpha/2)(alpha/2 - Q) + m^2 R^2 / 4."""
        w = conformal_weights(params, -1.0, m=1, eta=0.5)
        assert w.delta_bulk == pytest.approx(3.5)
        assert w.delta_boundary == pytest.approx(0.25 * 1.75)
        assert w.central_charge == pytest.approx(-12.5)

    def test_reflection_preserves_weight(self, params):
        """Test that alpha and 2Q - alpha share the bulk weight."""
        alpha = -0.75
        a = conformal_weights(params, alpha).delta_bulk
        b = conformal_weights(params, reflected_charge(params, alpha)).delta_bulk
        assert a == pytest.approx(b)

    def test_single_boundary_screening(self, params):
        """Test a configuration needing one boundary screening charge."""
        charges = ChargeConfig.from_lists(alphas=[-1.0, -1.0])
        assert neutrality_defect(params, charges, 1) == pytest.approx(-0.5)
        assert neutrality_solutions(params, charges, 1) == frozenset({(0, 1)})

    def test_two_screening_options(self, params):
        """Test that 2p + q = 2 gives (1, 0) and (0, 2)."""
        charges = ChargeConfig.from_lists(alphas=[-1.25, -1.25])
        assert neutrality_solutions(params, charges, 1) == frozenset({(1, 0), (0, 2)})
        assert seiberg_bound_holds(params, charges, 1)

    def test_empty_set(self, params):
        """Test that a positive defect has no solutions."""
        charges = ChargeConfig.from_lists(alphas=[-1.25])
        assert neutrality_solutions(params, charges, 1) == frozenset()
        assert not seiberg_bound_holds(params, charges, 1)

    def test_degree_shifts_defect(self, params):
        """Test that the functional degree enters as n/R."""
        charges = ChargeConfig.from_lists(alphas=[-1.0, -1.0], extra_degree=2)
        assert neutrality_defect(params, charges, 1) == pytest.approx(0.0)
        assert neutrality_solutions(params, charges, 1) == frozenset({(0, 0)})
