import math

import numpy as np
import pytest

from src.errors import LatticeError
from src.lattice import (
    DIRECTIONS,
    Configuration,
    TorusGeometry,
    angle_bin,
    direction,
    read_snapshot,
    set_angle,
    swap,
    translate,
    wrap_angle,
    write_snapshot,
)


# ============================================================================
# GEOMETRY
# ============================================================================


def test_neighbor_wraps_around(torus4):
    corner = torus4.site(3, 0)
    assert torus4.neighbor(corner, 0, 1) == torus4.site(0, 0)
    assert torus4.neighbor(corner, 1, -1) == torus4.site(3, 3)


def test_neighbor_table_matches_neighbor(torus4):
    table = torus4.neighbor_table
    for site in range(torus4.n_sites):
        for k, (axis, delta) in enumerate(DIRECTIONS):
            assert table[site, k] == torus4.neighbor(site, axis, delta)


def test_box_sites_size_and_bounds():
    geometry = TorusGeometry(5)
    box = geometry.box_sites(0, 2)
    assert len(set(box.tolist())) == 25
    with pytest.raises(LatticeError):
        geometry.box_sites(0, 3)


def test_bad_side_and_site():
    with pytest.raises(LatticeError):
        TorusGeometry(0)
    with pytest.raises(LatticeError):
        TorusGeometry(3).coords(9)


# ============================================================================
# ANGLES
# ============================================================================


def test_two_bins_are_centered_on_zero_and_pi():
    assert angle_bin(0.0, 2) == 0
    assert angle_bin(math.pi, 2) == 1
    assert angle_bin(2 * math.pi - 1e-9, 2) == 0


def test_direction_is_exact_on_axes():
    c, s = direction(np.array([0.0, math.pi / 2, math.pi]))
    np.testing.assert_array_equal(c, [1.0, 0.0, -1.0])
    np.testing.assert_array_equal(s, [0.0, 1.0, 0.0])


def test_wrap_angle_range():
    wrapped = wrap_angle(np.array([-1e-20, -math.pi, 7.0, 2 * math.pi]))
    assert np.all((wrapped >= 0) & (wrapped < 2 * math.pi))


# ============================================================================
# CONFIGURATIONS
# ============================================================================


def test_from_arrays_rejects_bad_occupancy(torus4):
    with pytest.raises(LatticeError):
        Configuration.from_arrays(torus4, np.full(16, 2))
    with pytest.raises(LatticeError):
        Configuration.from_arrays(torus4, np.zeros(15))


def test_empty_sites_carry_angle_zero(torus4):
    config = Configuration.from_arrays(torus4, np.zeros(16), np.full(16, 1.5))
    assert np.all(config.angle == 0.0)
    config.validate()


def test_swap_moves_contents_and_keeps_index(random_config):
    x = int(random_config.particles[0])
    y = random_config.geometry.neighbor(x, 0, 1)
    out = swap(random_config, x, y)
    out.validate()
    assert out.angle[y] == random_config.angle[x]
    assert out.occupancy[y] == 1
    assert swap(out, x, y).same_state(random_config)


def test_swap_is_pure(random_config):
    before = random_config.copy()
    swap(random_config, 0, 5)
    assert random_config.same_state(before)


def test_translate_roundtrip(random_config):
    geometry = random_config.geometry
    site = geometry.site(1, 3)
    back = geometry.site(-1, -3)
    moved = translate(random_config, site)
    assert moved.particle_count == random_config.particle_count
    assert translate(moved, back).same_state(random_config)
    # (tau_x eta)_0 = eta_x
    assert moved.occupancy[0] == random_config.occupancy[site]


def test_set_angle(random_config):
    x = int(random_config.particles[0])
    turned = set_angle(random_config, x, 7.0)
    assert turned.angle[x] == pytest.approx(7.0 - 2 * math.pi)
    empty = int(np.flatnonzero(random_config.occupancy == 0)[0])
    with pytest.raises(LatticeError):
        set_angle(random_config, empty, 1.0)


def test_snapshot_is_bit_exact(tmp_path, random_config):
    path = write_snapshot(tmp_path / "snap.ndjson", random_config, seed=3, time=0.25)
    config, header = read_snapshot(path)
    assert config.same_state(random_config)
    assert header == {"N": 4, "seed": 3, "time": 0.25}
