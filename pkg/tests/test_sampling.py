import math

import numpy as np
import pytest
from scipy.stats import chisquare

from src.errors import LatticeError, ProfileError
from src.lattice import (
    AngleMeasure,
    CanonicalState,
    InitialProfile,
    TorusGeometry,
    canonical_state_of,
    condition_to_canonical,
    empirical_angular_density,
    sample_grand_canonical,
    sample_product_measure,
)


def test_same_seed_same_configuration():
    profile = InitialProfile.constant(0.4)
    geometry = TorusGeometry(16)
    a = sample_product_measure(profile, geometry, 11)
    b = sample_product_measure(profile, geometry, 11)
    assert a.same_state(b)


def test_zero_profile_gives_empty_lattice():
    config = sample_product_measure(InitialProfile.zero(), TorusGeometry(8), 0)
    assert config.particle_count == 0


def test_constant_profile_marginals():
    geometry = TorusGeometry(64)
    config = sample_product_measure(InitialProfile.constant(0.5), geometry, 5)
    n = geometry.n_sites
    sigma = math.sqrt(0.25 / n)
    assert abs(config.particle_count / n - 0.5) < 4 * sigma

    angles = config.angle[config.particles]
    counts = np.bincount((angles / (2 * math.pi) * 8).astype(int), minlength=8)
    assert chisquare(counts).pvalue > 0.001


def test_two_type_profile_uses_two_angles():
    profile = InitialProfile.two_type(lambda u1, u2: 0.2 + 0 * u1, lambda u1, u2: 0.3 + 0 * u1)
    config = sample_product_measure(profile, TorusGeometry(32), 1)
    angles = set(config.angle[config.particles].tolist())
    assert angles <= {0.0, math.pi}


def test_full_profile_is_refused():
    with pytest.raises(ProfileError):
        sample_product_measure(InitialProfile.constant(1.0), TorusGeometry(8), 0)


def test_canonical_conditioning_keeps_multiset(rng):
    state = CanonicalState(1, (0.0, 0.0, math.pi, 1.0))
    config = condition_to_canonical(state, rng)
    assert config.side == 3
    assert sorted(config.angle[config.particles].tolist()) == sorted(state.angles)
    assert canonical_state_of(config, 4, 1) == state


def test_canonical_state_too_full():
    with pytest.raises(LatticeError):
        CanonicalState(1, tuple(range(10)))


def test_empirical_density_mass(random_config):
    measure = empirical_angular_density(random_config, 5, 1)
    box = random_config.geometry.box_sites(5, 1)
    assert measure.mass == pytest.approx(random_config.occupancy[box].sum() / 9)


def test_grand_canonical_density():
    config = sample_grand_canonical(AngleMeasure.uniform(0.3, 4), 64, 2)
    assert abs(config.particle_count / 4096 - 0.3) < 4 * math.sqrt(0.21 / 4096)


# ============================================================================
# MEASURES
# ============================================================================


def test_measure_mass_bound():
    with pytest.raises(LatticeError):
        AngleMeasure.atomic([0.0, 1.0], [0.6, 0.6])
    with pytest.raises(LatticeError):
        AngleMeasure.atomic([0.0], [-0.1])


def test_uniform_measure_rebinning():
    measure = AngleMeasure.uniform(0.4, 8)
    np.testing.assert_allclose(measure.binned(4), np.full(4, 0.1), atol=1e-14)
    np.testing.assert_allclose(measure.binned(8), np.full(8, 0.05))


def test_integration_by_quadrature():
    measure = AngleMeasure.uniform(0.5, 4)
    assert measure.integrate(lambda t: np.ones_like(t)) == pytest.approx(0.5, abs=1e-14)
    assert measure.integrate(np.cos) == pytest.approx(0.0, abs=1e-12)


def test_atomic_binning():
    measure = AngleMeasure.atomic([0.0, math.pi], [0.1, 0.2])
    np.testing.assert_allclose(measure.binned(2), [0.1, 0.2])
