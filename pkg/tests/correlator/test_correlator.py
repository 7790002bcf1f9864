"""Unit tests for disk correlators, their covariance and the annulus weights."""

import math

import numpy as np
import pytest
from scipy.special import ellipk

from ciltlab.correlator import (
    Backend,
    CorrelatorConfig,
    annulus_topological_sum,
    annulus_topological_weight,
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
    spin_angle,
    spin_phase,
    term_table,
    weyl_constant_rho_check,
    zero_mode_weight,
)
from ciltlab.errors import DomainError, GeometryError, NeutralityError, UnsupportedSurface
from ciltlab.geometry import annulus, disk
from ciltlab.params import ChargeConfig, neutrality_solutions, validate_params
from ciltlab.topology import disk_form, radial_family, random_family, regularized_norm


@pytest.fixture
def params():
    return validate_params(1.0, 4.0, mu=1.0, mu_boundary=1.0)


def _config(params, **kwargs):
    charges = kwargs.pop("charges", ChargeConfig.from_lists(alphas=[-1.0, -1.0]))
    return CorrelatorConfig(params=params, charges=charges, **kwargs)


def _neutral_charges(rng, n):
    """Random charges on the R = 4 lattice whose neutrality equation is 2p + q = n (Q = -3/2)."""
    s = int(rng.integers(1, 4))
    etas = list(rng.integers(-2, 3, int(rng.integers(0, 2))) / 2.0)
    alphas = list(rng.integers(-5, 1, s - 1) / 4.0)
    alphas.append(-n / 2.0 - 1.5 - sum(etas) / 2.0 - sum(alphas))
    return ChargeConfig.from_lists(alphas=alphas, windings=list(rng.integers(-2, 3, s)), etas=etas)


class TestConfig:
    """Test cases for CorrelatorConfig."""

    def test_backend_from_string(self, params):
        """Test that backend names are coerced."""
        assert _config(params, backend="monte_carlo").backend is Backend.MONTE_CARLO
        with pytest.raises(DomainError):
            _config(params, backend="lattice")

    def test_epsilon_range(self, params):
        """Test that epsilon must lie in (0, 1/2)."""
        with pytest.raises(DomainError):
            _config(params, epsilon=0.5)

    def test_zero_mode(self):
        """Test the zero-mode integral on and off neutrality."""
        assert zero_mode_weight(0.0, 4.0) == pytest.approx(8 * math.pi)
        assert zero_mode_weight(0.25, 4.0) == 0.0


class TestDiskCorrelator:
    """Test cases for the disk correlator."""

    def test_single_boundary_screening(self, params):
        """Test the one-term expansion against an elliptic integral."""
        result = disk_correlator(_config(params))
        # two alpha = -1 insertions at +-1/2 and one boundary screening charge
        fixed = 1.25 * 0.75
        expected = -fixed * 4.0 * ellipk(0.0625)
        assert result.neutrality_set == frozenset({(0, 1)})
        assert complex(result.value) == pytest.approx(expected, rel=1e-7)
        assert result.stderr == 0.0

    def test_fixed_factor(self, params):
        """Test the Gaussian factor of the two insertions alone."""
        sites = fixed_sites(ChargeConfig.from_lists(alphas=[-1.0, -1.0]))
        assert fixed_factor(sites) == pytest.approx(1.25 * 0.75)

    def test_empty_neutrality_set(self, params):
        """Test that a non-neutral configuration gives exactly zero."""
        result = disk_correlator(_config(params, charges=ChargeConfig.from_lists(alphas=[-1.25])))
        assert result.value == 0
        assert result.neutrality_set == frozenset()
        assert result.per_term == {}

    def test_vanishing_constant_skips_term(self):
        """Test that mu_b = 0 removes the boundary term without evaluating it."""
        params = validate_params(1.0, 4.0)
        result = disk_correlator(_config(params))
        assert result.value == 0
        assert result.per_term[(0, 1)].n_samples == 0

    def test_prefactor(self, params):
        """Test (-mu)^p (-mu_b)^q / (p! q!) on the neutrality set."""
        assert expansion_prefactor(_config(params), 0, 1) == pytest.approx(-1.0)
        assert expansion_prefactor(_config(params), 1, 1) == 0

    def test_term_without_prefactor(self, params):
        """Test that the bare (0, 1) moment is positive and exact."""
        term = coulomb_gas_term(_config(params), 0, 1)
        assert complex(term.value) == pytest.approx(0.9375 * 4.0 * ellipk(0.0625), rel=1e-7)
        with pytest.raises(NeutralityError):
            coulomb_gas_term(_config(params), 1, 0)

    def test_term_outside_neutrality(self, params):
        """Test that a non-neutral term is rejected."""
        with pytest.raises(NeutralityError):
            check_term(_config(params), 1, 0)

    def test_disk_only(self, params):
        """Test that other surfaces are rejected."""
        with pytest.raises(UnsupportedSurface):
            disk_correlator(_config(params, surface=annulus(0.3)))

    def test_term_table(self, params):
        """Test the CSV rows of a result."""
        rows = term_table(disk_correlator(_config(params)))
        assert [r["term_id"] for r in rows] == ["0,1"]
        assert set(rows[0]) == {"term_id", "value_re", "value_im", "stderr", "n_samples"}

    @pytest.mark.parametrize("p,q", [(0, 1), (1, 0)])
    def test_crosscheck_at_fixed_scale(self, params, p, q):
        """Test the shifted field Monte Carlo against the Coulomb gas at eps = 0.01, inside or outside neutrality."""
        mc, reference = mc_moment_crosscheck(_config(params, n_samples=100_000, epsilon=0.01, threads=1), p, q)
        assert reference.stderr == 0.0
        assert mc.within(reference.value, 3.0)
        # insertions on the real axis: the imaginary part is noise
        assert abs(complex(mc.value).imag) <= 3.0 * mc.stderr

    def test_crosscheck_without_screening(self, params):
        """Test that the (0, 0) moment is the Gaussian factor of the insertions at eps."""
        config = _config(params, epsilon=0.01)
        mc, reference = mc_moment_crosscheck(config, 0, 0)
        expected = fixed_factor(fixed_sites(config.charges), 0.01)
        assert complex(mc.value) == pytest.approx(expected, rel=1e-10)
        assert complex(reference.value) == pytest.approx(expected, rel=1e-10)

    def test_raw_field_average_without_screening(self, params):
        """Test the unshifted average of eps-normalized vertices against the Gaussian factor."""
        config = _config(params, n_samples=100_000, epsilon=0.01, threads=1)
        est = field_moment_mc(config, 0, 0, seed=5)
        assert est.within(fixed_factor(fixed_sites(config.charges), 0.01), 5.0)

    def test_shifted_moment_is_less_noisy(self, params):
        """Test that shifting the insertions out shrinks the standard error of the (0, 1) moment."""
        config = _config(params, n_samples=20_000, epsilon=0.01, threads=1)
        assert shifted_moment_mc(config, 0, 1, seed=2).stderr < field_moment_mc(config, 0, 1, seed=2).stderr

    def test_crosscheck_rejects_negative_counts(self, params):
        """Test that negative screening numbers are rejected."""
        with pytest.raises(DomainError):
            mc_moment_crosscheck(_config(params), -1, 0)


class TestMagneticFactor:
    """Test cases for the magnetic weight."""

    def test_no_windings(self, params):
        """Test that electric-only configurations have weight one."""
        factor = magnetic_factor(_config(params))
        assert factor.value == 1
        assert factor.phase is None

    def test_energy_weight(self, params):
        """Test that the modulus is exp(-pi R^2 |omega|^2_reg)."""
        charges = ChargeConfig.from_lists(alphas=[-1.0, -1.0], positions=[0.5, -0.5], windings=[1, -1])
        factor = magnetic_factor(_config(params, charges=charges))
        norm = regularized_norm(disk_form(disk([0.5, -0.5]), [1, -1]))
        assert abs(factor.value) == pytest.approx(math.exp(-16 * math.pi * norm), rel=1e-8)
        w = np.array([[0.1j]])
        y = np.empty((1, 0), dtype=complex)
        assert abs(factor.phase(w, y)[0]) == pytest.approx(1.0)


class TestCovariance:
    """Test cases for Weyl and spin covariance."""

    @pytest.mark.parametrize("seed", range(20))
    def test_weyl_residual_vanishes(self, params, seed):
        """Test the constant Weyl identity on random neutral configurations."""
        rng = np.random.default_rng(seed)
        charges = _neutral_charges(rng, int(rng.integers(0, 5)))
        config = _config(params, charges=charges)
        assert neutrality_solutions(params, charges, 1)
        assert weyl_constant_rho_check(config, float(rng.uniform(-1.0, 1.0))) == pytest.approx(0.0, abs=1e-10)

    def test_weyl_needs_neutrality(self, params):
        """Test that the Weyl check refuses non-neutral configurations."""
        with pytest.raises(NeutralityError):
            weyl_constant_rho_check(_config(params, charges=ChargeConfig.from_lists(alphas=[-1.25])), 0.3)

    def test_spin_phase(self, params):
        """Test R (alpha - Q) m theta for one rotated insertion."""
        charges = ChargeConfig.from_lists(alphas=[-1.0, -1.0], windings=[1, 0])
        assert spin_angle(charges, params, [math.pi / 2, 0.0]) == pytest.approx(math.pi)
        assert spin_phase(charges, params, [math.pi / 2, 0.0]) == pytest.approx(-1.0)
        assert spin_phase(charges, params, [math.pi, 0.0]) == 1

    @pytest.mark.parametrize("seed", range(50))
    def test_spin_angle_is_linear(self, params, seed):
        """Test that turning insertion j by one radian adds R (alpha_j - Q) m_j."""
        rng = np.random.default_rng(100 + seed)
        charges = _neutral_charges(rng, int(rng.integers(0, 5)))
        theta = list(rng.uniform(-math.pi, math.pi, len(charges.bulk)))
        base = spin_angle(charges, params, theta)
        for j, c in enumerate(charges.bulk):
            turned = list(theta)
            turned[j] += 1.0
            slope = spin_angle(charges, params, turned) - base
            assert slope == pytest.approx(4.0 * (c.alpha + 1.5) * c.m, abs=1e-12)
        assert spin_phase(charges, params, [2.0 * math.pi] * len(charges.bulk)) == 1

    def test_spin_length_mismatch(self, params):
        """Test that one angle per bulk insertion is required."""
        with pytest.raises(DomainError):
            spin_angle(ChargeConfig.from_lists(alphas=[-1.0]), params, [0.1, 0.2])


class TestAnnulus:
    """Test cases for the annulus topological weights."""

    def test_family_independence(self, params):
        """Test that the radial family and four random families give the same weights."""
        surface = annulus(0.3, [0.6, -0.5 + 0.2j])
        charges = ChargeConfig.from_lists(alphas=[-1.0, 1.0], positions=list(surface.punctures), windings=[1, -1])
        config = _config(params, charges=charges, surface=surface)
        radial = radial_family(surface)
        others = [random_family(surface, np.random.default_rng(seed)) for seed in (3, 5, 7, 11)]
        base = clear_base_point(radial, *others)
        for k in (0, 1, -1):
            a = annulus_topological_weight(config, radial, k, base)
            for other in others:
                assert annulus_topological_weight(config, other, k, base) == pytest.approx(a, rel=1e-8)

    def test_energy_without_punctures(self, params):
        """Test |w_k| = exp(-R^2 k^2 log(1/r) / 2) on an empty annulus."""
        r = 0.4
        surface = annulus(r)
        config = _config(params, charges=ChargeConfig(), surface=surface)
        family = radial_family(surface)
        for k in (0, 1, 2):
            weight = annulus_topological_weight(config, family, k)
            assert abs(weight) == pytest.approx(math.exp(-16.0 * k * k * math.log(1 / r) / 2.0), rel=1e-8)

    def test_sum_collects_terms(self, params):
        """Test that the returned sum is the sum of the returned terms."""
        surface = annulus(0.4)
        config = _config(params, charges=ChargeConfig(), surface=surface)
        total, terms = annulus_topological_sum(config, radial_family(surface))
        assert 0 in terms
        assert total == pytest.approx(sum(terms.values()))

    def test_family_must_match_insertions(self, params):
        """Test that the family's punctures must be the bulk insertions."""
        surface = annulus(0.3, [0.6])
        with pytest.raises(GeometryError):
            annulus_topological_weight(_config(params, surface=surface), radial_family(surface), 0)
