import math

import numpy as np
import pytest

from src.lattice import AngleMeasure, circular_distance, param_distance


def _random_measure(rng, atoms=3):
    return AngleMeasure.atomic(rng.uniform(0, 2 * math.pi, atoms), rng.uniform(0, 0.3, atoms))


def test_distance_to_itself_is_zero(rng):
    a = _random_measure(rng)
    assert param_distance(a, a) == pytest.approx(0.0, abs=1e-12)


def test_symmetry_and_triangle_inequality(rng):
    for _ in range(5):
        a, b, c = (_random_measure(rng) for _ in range(3))
        ab = param_distance(a, b)
        assert ab == pytest.approx(param_distance(b, a), abs=1e-12)
        assert ab <= param_distance(a, c) + param_distance(c, b) + 1e-12


def test_mass_difference_of_uniform_measures():
    # every admissible test function is bounded by 1 and the difference is a positive measure
    d = param_distance(AngleMeasure.uniform(0.5, 4), AngleMeasure.uniform(0.3, 4))
    assert d == pytest.approx(0.2, abs=1e-12)


def test_small_rotation_of_an_atom():
    w, shift = 0.4, 0.1
    d = param_distance(AngleMeasure.atomic([0.0], [w]), AngleMeasure.atomic([shift], [w]))
    assert d == pytest.approx(w * shift, rel=1e-9)


def test_zero_measures():
    assert param_distance(AngleMeasure.zero(), AngleMeasure.zero()) == 0.0


def test_circular_distance():
    np.testing.assert_allclose(circular_distance([0.1, 6.2], [6.2, 0.1]), 2 * math.pi - 6.1)
