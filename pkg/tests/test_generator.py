import numpy as np
import pytest

from src.dynamics import (
    ModelParams,
    alignment_rate,
    apply_generator,
    asymmetric_part,
    current_asym,
    current_sym,
    glauber_part,
    symmetric_part,
)
from src.exactcheck import TinyModel, build_generators


def test_generator_action_matches_the_enumerated_matrix(rng):
    model = TinyModel(2, 2, drift=1.0, beta=0.5)
    matrix = build_generators(model).full()
    values = rng.standard_normal(model.n_states)
    expected = matrix @ values

    def f(config):
        return values[model.index_of_configuration(config)]

    params = ModelParams(side=2, drift=1.0, beta=0.5, two_type=True)
    for index in range(model.n_states):
        got = apply_generator(f, model.configuration(index), params)
        assert got == pytest.approx(expected[index], abs=1e-9)


def test_particle_number_is_conserved(random_config):
    params = ModelParams(side=4, drift=2.0, beta=1.0)
    assert apply_generator(lambda c: c.particle_count, random_config, params) == pytest.approx(0.0, abs=1e-9)


@pytest.mark.parametrize("omega", [np.cos, np.sin, lambda t: np.ones_like(t)])
def test_symmetric_current_identity(random_config, omega):
    geometry = random_config.geometry
    for x in range(geometry.n_sites):
        lhs = symmetric_part(lambda c: c.weighted(omega)[x], random_config)
        rhs = sum(
            current_sym(random_config, geometry.neighbor(x, axis, -1), axis, omega)
            - current_sym(random_config, x, axis, omega)
            for axis in (0, 1)
        )
        assert lhs == pytest.approx(rhs, abs=1e-12)


@pytest.mark.parametrize("omega", [np.cos, lambda t: np.ones_like(t)])
def test_asymmetric_current_identity(random_config, omega):
    geometry = random_config.geometry
    drift = 1.5
    for x in range(geometry.n_sites):
        lhs = asymmetric_part(lambda c: c.weighted(omega)[x], random_config, drift)
        rhs = sum(
            current_asym(random_config, geometry.neighbor(x, axis, -1), axis, omega, drift)
            - current_asym(random_config, x, axis, omega, drift)
            for axis in (0, 1)
        )
        assert lhs == pytest.approx(rhs, abs=1e-12)


def test_glauber_part_is_the_alignment_rate(random_config):
    params = ModelParams(side=4, beta=0.7)
    for x in random_config.particles[:3]:
        x = int(x)
        value = glauber_part(lambda c: c.weighted(np.cos)[x], random_config, params)
        assert value == pytest.approx(alignment_rate(random_config, x, np.cos, params), abs=1e-12)


def test_support_restriction_keeps_local_values(random_config):
    x = int(random_config.particles[0])
    f = lambda c: c.weighted(np.cos)[x]  # noqa: E731
    support = [x, *random_config.geometry.neighbor_table[x].tolist()]
    params = ModelParams(side=4, drift=1.0, beta=0.3)
    full = apply_generator(f, random_config, params)
    local = apply_generator(f, random_config, params, support=support)
    assert local == pytest.approx(full, abs=1e-12)


def test_alignment_rate_vanishes_on_empty_sites(random_config):
    empty = int(np.flatnonzero(random_config.occupancy == 0)[0])
    assert alignment_rate(random_config, empty, np.cos, ModelParams(side=4, beta=1.0)) == 0.0
