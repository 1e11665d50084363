import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import i0, i1
from scipy.stats import chisquare

from src.dynamics import (
    ModelParams,
    glauber_density,
    glauber_law,
    jump_rate,
    resultant,
    sample_glauber_angle,
    two_type_weights,
    von_mises_parameters,
)
from src.dynamics.kernel import von_mises_draw
from src.errors import ConfigError, LatticeError
from src.lattice import Configuration, TorusGeometry


def _pair_config(theta=0.0):
    """Particle at (1, 1) with angle theta, one neighbour at (1, 2)."""
    geometry = TorusGeometry(4)
    occupancy = np.zeros(16, dtype=np.uint8)
    angle = np.zeros(16)
    x, y = geometry.site(1, 1), geometry.site(1, 2)
    occupancy[[x, y]] = 1
    angle[x] = theta
    angle[y] = math.pi / 2
    return Configuration.from_arrays(geometry, occupancy, angle), x, y


def test_params_validation():
    with pytest.raises(ConfigError) as info:
        ModelParams(side=4, drift=5.0, beta=-1.0)
    assert set(info.value.keys) == {"drift", "beta"}


def test_jump_rates_with_drift():
    config, x, _ = _pair_config(theta=0.0)
    params = ModelParams(side=4, drift=2.0)
    assert jump_rate(config, params, x, 0, 1) == pytest.approx(16 * (1 + 2.0 / 4))
    assert jump_rate(config, params, x, 0, -1) == pytest.approx(16 * (1 - 2.0 / 4))
    assert jump_rate(config, params, x, 1, -1) == pytest.approx(16.0)
    # target occupied
    assert jump_rate(config, params, x, 1, 1) == 0.0


def test_jump_rate_from_empty_site():
    config, _, _ = _pair_config()
    with pytest.raises(LatticeError):
        jump_rate(config, ModelParams(side=4), 0, 0, 1)


def test_resultant_counts_occupied_neighbours():
    config, x, _ = _pair_config()
    sx, sy = resultant(config, x)
    assert (sx, sy) == pytest.approx((0.0, 1.0))


@pytest.mark.parametrize("beta", [0.0, 0.5, 2.0])
def test_glauber_law_is_normalized(rng, beta):
    geometry = TorusGeometry(5)
    for _ in range(20):
        occupancy = (rng.random(25) < 0.6).astype(np.uint8)
        occupancy[12] = 1
        config = Configuration.from_arrays(geometry, occupancy, rng.uniform(0, 2 * math.pi, 25))
        _, weights = glauber_law(config, 12, ModelParams(side=5, beta=beta))
        assert weights.sum() == pytest.approx(1.0, abs=1e-10)


def test_glauber_density_is_uniform_without_alignment():
    config, x, _ = _pair_config()
    values = glauber_density(config, x, np.linspace(0, 6, 7), beta=0.0)
    np.testing.assert_allclose(values, 1 / (2 * math.pi))


def test_two_type_weights():
    config, x, y = _pair_config()
    # neighbour at pi/2 contributes nothing along the two-type axis
    np.testing.assert_allclose(two_type_weights(config, x, 3.0), [0.5, 0.5])
    aligned = Configuration.from_arrays(config.geometry, config.occupancy)
    p_plus, p_minus = two_type_weights(aligned, x, 1.0)
    assert p_plus == pytest.approx(1 / (1 + math.exp(-2.0)))
    assert p_plus + p_minus == pytest.approx(1.0)


def test_glauber_samples_follow_the_von_mises_law(rng):
    config, x, _ = _pair_config()
    params = ModelParams(side=4, beta=2.0)
    draws = np.array([sample_glauber_angle(config, x, params, rng) for _ in range(20000)])
    assert np.all((draws >= 0) & (draws < 2 * math.pi))
    # location pi/2, concentration 2: E[sin] = I1(2) / I0(2)
    assert np.mean(np.sin(draws)) == pytest.approx(i1(2.0) / i0(2.0), abs=0.02)
    assert np.mean(np.cos(draws)) == pytest.approx(0.0, abs=0.02)


CHI2_DRAWS = 100_000
CHI2_BINS = 36


def _neighbourhood(angles):
    """Particle at (2, 2) of a 5x5 torus with occupied neighbours carrying `angles`."""
    geometry = TorusGeometry(5)
    occupancy = np.zeros(25, dtype=np.uint8)
    angle = np.zeros(25)
    x = geometry.site(2, 2)
    occupancy[x] = 1
    for site, theta in zip(geometry.neighbor_table[x], angles):
        occupancy[site] = 1
        angle[site] = theta
    return Configuration.from_arrays(geometry, occupancy, angle), x


def _binned_law(config, site, beta):
    edges = np.linspace(0.0, 2 * math.pi, CHI2_BINS + 1)
    def density(t):
        return glauber_density(config, site, t, beta)

    masses = np.array([quad(density, a, b)[0] for a, b in zip(edges, edges[1:])])
    return edges, masses / masses.sum()


def _chi2_pvalue(draws, config, site, beta):
    edges, law = _binned_law(config, site, beta)
    observed, _ = np.histogram(draws, bins=edges)
    return chisquare(observed, CHI2_DRAWS * law).pvalue


NEIGHBOUR_SETS = [(0.3,), (0.0, 2.0, 4.5), (1.0, 1.2, 4.0, 5.5)]


@pytest.mark.parametrize("beta", [0.0, 0.5, 2.0])
@pytest.mark.parametrize("angles", NEIGHBOUR_SETS)
def test_glauber_sampler_chi_square(beta, angles, rng):
    config, x = _neighbourhood(angles)
    params = ModelParams(side=5, beta=beta)
    draws = np.array([sample_glauber_angle(config, x, params, rng) for _ in range(CHI2_DRAWS)])
    assert _chi2_pvalue(draws, config, x, beta) > 1e-3


@pytest.mark.parametrize("beta", [0.0, 0.5, 2.0])
@pytest.mark.parametrize("angles", NEIGHBOUR_SETS)
def test_compiled_sampler_chi_square(beta, angles, rng):
    config, x = _neighbourhood(angles)
    phi, kappa = von_mises_parameters(config, x, beta)
    draws = np.array([von_mises_draw(rng, phi, kappa) for _ in range(CHI2_DRAWS)])
    assert np.all((draws >= 0) & (draws < 2 * math.pi))
    assert _chi2_pvalue(draws, config, x, beta) > 1e-3


def test_two_type_sampler_returns_atoms(rng):
    config, x, _ = _pair_config()
    params = ModelParams(side=4, beta=1.0, two_type=True)
    draws = {sample_glauber_angle(config, x, params, rng) for _ in range(50)}
    assert draws <= {0.0, math.pi}
