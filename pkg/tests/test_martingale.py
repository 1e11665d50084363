import math

import numpy as np
import pytest

from src.dynamics import ModelParams
from src.hydro import (
    MartingaleSample,
    TestFunction,
    empirical_pairing,
    exchange_compensator,
    martingale_increment,
    martingale_variance_slope,
    sample_martingale,
)
from src.lattice import Configuration, InitialProfile, TorusGeometry


def _single(side=8, site=10, theta=0.0):
    geometry = TorusGeometry(side)
    occupancy = np.zeros(geometry.n_sites, dtype=np.uint8)
    occupancy[site] = 1
    angle = np.zeros(geometry.n_sites)
    angle[site] = theta
    return Configuration.from_arrays(geometry, occupancy, angle)


def test_empirical_pairing_counts_particles():
    config = _single()

    def one(t, u1, u2, theta):
        return np.ones_like(u1)

    assert empirical_pairing(config, 0.0, one) == pytest.approx(1 / 64)
    full = Configuration.from_arrays(TorusGeometry(4), np.ones(16))
    assert empirical_pairing(full, 0.0, one) == pytest.approx(1.0)


def test_compensator_of_a_lone_particle_is_the_discrete_laplacian():
    side, site = 8, 10
    H = TestFunction.plane_wave(1, 2, phase=0.4)
    row, col = divmod(site, side)
    u1, u2 = row / side, col / side

    def h(a, b):
        return float(H.value(0.0, np.array(a), np.array(b), np.array(0.0)))

    step = 1 / side
    laplacian = h(u1 + step, u2) + h(u1 - step, u2) + h(u1, u2 + step) + h(u1, u2 - step) - 4 * h(u1, u2)
    assert exchange_compensator(_single(side, site), 0.0, H) == pytest.approx(laplacian)


def test_drift_biases_the_compensator_along_the_angle():
    side = 8
    H = TestFunction.plane_wave(1, 0, phase=0.3)
    config = _single(side, theta=0.0)
    row, col = divmod(10, side)
    u1 = row / side
    forward = math.cos(2 * math.pi * (u1 + 1 / side) + 0.3) - math.cos(2 * math.pi * u1 + 0.3)
    backward = math.cos(2 * math.pi * (u1 - 1 / side) + 0.3) - math.cos(2 * math.pi * u1 + 0.3)
    # lambda_1 = lambda for theta = 0; rates N^2 (1 +- lambda / N), divided by N^2
    expected = (1 + 2.0 / side) * forward + (1 - 2.0 / side) * backward
    assert exchange_compensator(config, 0.0, H, drift=2.0) == pytest.approx(expected)


def test_blocked_lattice_has_no_martingale():
    full = Configuration.from_arrays(TorusGeometry(4), np.ones(16))
    H = TestFunction.plane_wave(0, 0, growth=-2.0)
    assert exchange_compensator(full, 0.0, H) == 0.0
    # d_t <pi, H> is integrated by the trapezoid rule only
    times = np.linspace(0.0, 0.1, 201)
    value = martingale_increment([full] * times.size, times, H)
    assert abs(value) < 1e-6


def test_increment_needs_matching_times():
    config = _single()
    with pytest.raises(ValueError):
        martingale_increment([config], [0.0], TestFunction.plane_wave())
    with pytest.raises(ValueError):
        martingale_increment([config, config], [0.0, 0.1, 0.2], TestFunction.plane_wave())


def test_martingale_is_centered(rng):
    params = ModelParams(side=16, drift=1.0, horizon=0.02)
    sample = sample_martingale(params, InitialProfile.constant(0.4), TestFunction.plane_wave(1, 1), 60, seed=rng)
    assert sample.values.shape == (60,)
    assert abs(sample.values.mean()) < 4 * math.sqrt(sample.variance / 60)


def test_variance_decays_like_inverse_square_side(rng):
    H = TestFunction.plane_wave(1, 1)
    samples = [
        sample_martingale(
            ModelParams(side=n, drift=1.0, beta=0.5, horizon=0.02),
            InitialProfile.constant(0.4),
            H,
            100,
            seed=rng,
        )
        for n in (8, 16, 32)
    ]
    assert abs(martingale_variance_slope(samples) + 2.0) <= 0.5


def test_variance_slope_of_a_power_law():
    samples = [MartingaleSample(side=n, values=np.array([-1.0, 1.0]) / n) for n in (16, 32, 64)]
    assert martingale_variance_slope(samples) == pytest.approx(-2.0)


def test_sampling_needs_two_replicas():
    with pytest.raises(ValueError):
        sample_martingale(
            ModelParams(side=8, horizon=0.01), InitialProfile.constant(0.4), TestFunction.plane_wave(), 1
        )
