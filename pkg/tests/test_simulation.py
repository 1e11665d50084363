import math
from collections import Counter

import numpy as np
import pytest

from src.dynamics import ModelParams, SimulationState, advance, step_events
from src.errors import LatticeError, TagLostError
from src.exactcheck import TinyModel, build_generators
from src.lattice import Configuration, InitialProfile, TorusGeometry, sample_product_measure


def _start(side=8, density=0.4, seed=3, **params):
    config = sample_product_measure(InitialProfile.constant(density), TorusGeometry(side), seed)
    return SimulationState.start(config, ModelParams(side=side, **params), rng=np.random.default_rng(seed))


def _single_particle(side=4, **params):
    geometry = TorusGeometry(side)
    occupancy = np.zeros(geometry.n_sites, dtype=np.uint8)
    occupancy[5] = 1
    config = Configuration.from_arrays(geometry, occupancy)
    return SimulationState.start(config, ModelParams(side=side, **params), rng=np.random.default_rng(9))


def test_zero_time_changes_nothing():
    state = _start()
    after = advance(state, 0.0)
    assert after.config.same_state(state.config)
    assert after.counters.events == 0
    with pytest.raises(ValueError):
        advance(state, -1.0)


def test_runs_are_reproducible():
    a = advance(_start(drift=2.0, beta=0.5), 0.02)
    b = advance(_start(drift=2.0, beta=0.5), 0.02)
    assert a.config.same_state(b.config)
    assert a.counters == b.counters
    assert a.time == b.time == pytest.approx(0.02)


def test_particles_are_conserved():
    state = _start(drift=3.0, beta=1.0)
    after = advance(state, 0.05)
    after.config.validate()
    assert after.config.particle_count == state.config.particle_count
    assert after.counters.accepted > 0


def test_event_budget_truncates():
    state = _start(max_events=10)
    after = advance(state, 10.0)
    assert after.truncated
    assert after.counters.events == 10
    assert after.time < 10.0


def test_single_particle_event_counts():
    # empty neighbourhood, no drift: every exchange attempt is accepted
    horizon = 50.0
    after = advance(_single_particle(), horizon)
    exchanges = 4 * 16 * horizon
    assert after.counters.accepted == after.counters.exchange_attempts
    assert abs(after.counters.accepted - exchanges) < 4 * math.sqrt(exchanges)
    assert abs(after.counters.angle_updates - horizon) < 4 * math.sqrt(horizon)


def test_full_lattice_blocks_every_exchange():
    geometry = TorusGeometry(4)
    config = Configuration.from_arrays(geometry, np.ones(16))
    state = SimulationState.start(config, ModelParams(side=4), rng=np.random.default_rng(0))
    after = advance(state, 0.1)
    assert after.counters.accepted == 0
    assert after.counters.rejected_exclusion == after.counters.exchange_attempts > 0


def test_tracer_displacement_is_unwrapped():
    state = _single_particle().tag(5)
    after = advance(state, 5.0)
    geometry = after.config.geometry
    dx1, dx2 = after.tracer.displacement
    assert after.tracer.site == geometry.shift(5, int(dx1), int(dx2))
    assert after.config.occupancy[after.tracer.site] == 1


def test_tagging_an_empty_site():
    with pytest.raises(TagLostError):
        _single_particle().tag(0)


def test_two_type_runs_stay_on_the_atoms():
    geometry = TorusGeometry(8)
    profile = InitialProfile.two_type(lambda u1, u2: 0.2 + 0 * u1, lambda u1, u2: 0.2 + 0 * u1)
    config = sample_product_measure(profile, geometry, 4)
    state = SimulationState.start(config, ModelParams(side=8, drift=2.0, beta=0.5, two_type=True))
    after = advance(state, 0.2)
    assert set(after.config.angle[after.config.particles].tolist()) <= {0.0, math.pi}

    continuous = sample_product_measure(InitialProfile.constant(0.3), geometry, 4)
    with pytest.raises(LatticeError):
        SimulationState.start(continuous, ModelParams(side=8, two_type=True))


def test_side_mismatch():
    state = _start(side=8)
    with pytest.raises(LatticeError):
        SimulationState.start(state.config, ModelParams(side=6))


def test_jump_chain_matches_the_exact_generator():
    """First-change law from one state of the 2x2 two-type torus vs the enumerated generator."""
    model = TinyModel(2, 2, drift=1.0, beta=0.5)
    rates = build_generators(model).full().toarray()
    geometry = TorusGeometry(2)
    # + at site 0, - at site 1, sites 2 and 3 empty
    start = Configuration.from_arrays(geometry, [1, 1, 0, 0], [0.0, math.pi, 0.0, 0.0])
    origin = model.index_of_configuration(start)
    row = rates[origin].copy()
    row[origin] = 0.0
    expected = row / row.sum()

    params = ModelParams(side=2, drift=1.0, beta=0.5, two_type=True)
    rng = np.random.default_rng(77)
    samples = 3000
    seen = Counter()
    for _ in range(samples):
        state = SimulationState.start(start, params, rng=rng)
        while state.config.same_state(start):
            state = step_events(state, 1)
        seen[model.index_of_configuration(state.config)] += 1

    assert set(seen) <= set(np.flatnonzero(expected).tolist())
    for target in np.flatnonzero(expected):
        p = expected[target]
        freq = seen[int(target)] / samples
        assert abs(freq - p) < 4.5 * math.sqrt(p * (1 - p) / samples)


def test_small_torus_relaxes_to_the_product_marginals():
    """N=3 two-type, no drift or alignment: at t=5 each site is + or - with probability K / 18."""
    geometry = TorusGeometry(3)
    # four + particles packed in the first row and a half
    start = Configuration.from_arrays(geometry, [1, 1, 1, 1, 0, 0, 0, 0, 0], np.zeros(9))
    params = ModelParams(side=3, two_type=True)
    rng = np.random.default_rng(11)
    replicas = 2000
    plus = np.zeros(9)
    minus = np.zeros(9)
    for _ in range(replicas):
        after = advance(SimulationState.start(start, params, rng=rng), 5.0)
        occupied = after.config.occupancy == 1
        plus += occupied & (after.config.angle == 0.0)
        minus += occupied & (after.config.angle == math.pi)

    # the angle has relaxed up to e^-5, far below the sampling error
    p = 4 / 18
    sigma = math.sqrt(p * (1 - p) / replicas)
    np.testing.assert_array_less(np.abs(plus / replicas - p), 4 * sigma)
    np.testing.assert_array_less(np.abs(minus / replicas - p), 4 * sigma)
    assert abs((plus.sum() - minus.sum()) / (4 * replicas)) < 4 * math.sqrt(1 / (4 * replicas))
