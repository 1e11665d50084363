"""
Lattice configurations (eta_x, theta_x) on the torus.

A Configuration owns three flat arrays: occupancy (uint8), angle (float64)
and the particle index (occupied sites, plus the inverse `slot` map) used for
O(1) uniform particle selection. Empty sites carry angle 0.

translate / swap / set_angle are pure: they return new configurations.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from src.errors import LatticeError

from .angles import wrap_angle
from .geometry import TorusGeometry


@dataclass
class Configuration:
    geometry: TorusGeometry
    occupancy: np.ndarray
    angle: np.ndarray
    particles: np.ndarray
    slot: np.ndarray

    # =========================================================================
    # CONSTRUCTION
    # =========================================================================

    @classmethod
    def empty(cls, geometry: TorusGeometry) -> "Configuration":
        n = geometry.n_sites
        return cls.from_arrays(geometry, np.zeros(n, dtype=np.uint8), np.zeros(n))

    @classmethod
    def from_arrays(
        cls,
        geometry: TorusGeometry,
        occupancy: np.ndarray,
        angle: Optional[np.ndarray] = None,
    ) -> "Configuration":
        """Build from occupancy and angle arrays, flat or (N, N)."""
        occ = np.asarray(occupancy).reshape(-1).astype(np.uint8)
        if occ.size != geometry.n_sites:
            raise LatticeError(
                f"occupancy has {occ.size} entries, torus has {geometry.n_sites} sites"
            )
        if np.any(occ > 1):
            raise LatticeError("occupancy must be 0/1")
        if angle is None:
            ang = np.zeros(occ.size)
        else:
            ang = np.asarray(angle, dtype=np.float64).reshape(-1).copy()
            if ang.size != occ.size:
                raise LatticeError("angle and occupancy sizes differ")
        ang = np.where(occ == 1, wrap_angle(ang), 0.0)
        particles = np.flatnonzero(occ).astype(np.int64)
        slot = np.full(occ.size, -1, dtype=np.int64)
        slot[particles] = np.arange(particles.size)
        return cls(geometry, occ, ang, particles, slot)

    def copy(self) -> "Configuration":
        return Configuration(
            self.geometry,
            self.occupancy.copy(),
            self.angle.copy(),
            self.particles.copy(),
            self.slot.copy(),
        )

    # =========================================================================
    # VIEWS
    # =========================================================================

    @property
    def side(self) -> int:
        return self.geometry.side

    @property
    def particle_count(self) -> int:
        return int(self.particles.size)

    @property
    def occupancy_grid(self) -> np.ndarray:
        return self.occupancy.reshape(self.side, self.side)

    @property
    def angle_grid(self) -> np.ndarray:
        return self.angle.reshape(self.side, self.side)

    def is_occupied(self, site: int) -> bool:
        self.geometry.check_site(site)
        return bool(self.occupancy[site])

    def weighted(self, omega) -> np.ndarray:
        """eta^omega_x = omega(theta_x) eta_x for all sites (flat)."""
        values = np.asarray(omega(self.angle), dtype=np.float64)
        values = np.broadcast_to(values, self.angle.shape)
        return np.where(self.occupancy == 1, values, 0.0)

    def same_state(self, other: "Configuration") -> bool:
        """Equality of (eta, theta); the particle index order is irrelevant."""
        return (
            self.geometry == other.geometry
            and np.array_equal(self.occupancy, other.occupancy)
            and np.array_equal(self.angle, other.angle)
        )

    def validate(self):
        """Check the index/bitmap agreement and the empty-site angle convention."""
        occupied = np.flatnonzero(self.occupancy)
        if not np.array_equal(np.sort(self.particles), occupied):
            raise LatticeError("particle index disagrees with occupancy")
        if not np.array_equal(self.slot[self.particles], np.arange(self.particles.size)):
            raise LatticeError("slot map disagrees with particle index")
        if np.any(self.angle[self.occupancy == 0] != 0.0):
            raise LatticeError("empty sites must carry angle 0")
        if np.any((self.angle < 0.0) | (self.angle >= 2.0 * np.pi)):
            raise LatticeError("angles must lie in [0, 2pi)")


# =============================================================================
# PURE MOVES
# =============================================================================


def translate(config: Configuration, site: int) -> Configuration:
    """tau_x: the configuration seen from x, (tau_x eta)_y = eta_{x+y}."""
    a, b = config.geometry.coords(site)
    occ = np.roll(config.occupancy_grid, (-a, -b), axis=(0, 1))
    ang = np.roll(config.angle_grid, (-a, -b), axis=(0, 1))
    return Configuration.from_arrays(config.geometry, occ, ang)


def swap(config: Configuration, x: int, y: int) -> Configuration:
    """eta^{x,y}: exchange the contents (occupancy and angle) of x and y."""
    config.geometry.check_site(x)
    config.geometry.check_site(y)
    out = config.copy()
    if x == y:
        return out
    out.occupancy[[x, y]] = config.occupancy[[y, x]]
    out.angle[[x, y]] = config.angle[[y, x]]
    sx, sy = config.slot[x], config.slot[y]
    out.slot[x], out.slot[y] = sy, sx
    if sy >= 0:
        out.particles[sy] = x
    if sx >= 0:
        out.particles[sx] = y
    return out


def set_angle(config: Configuration, site: int, theta: float) -> Configuration:
    """eta^{x,theta}: same configuration with the particle at x turned to theta."""
    if not config.is_occupied(site):
        raise LatticeError(f"set_angle on empty site {site}")
    out = config.copy()
    out.angle[site] = float(wrap_angle(theta))
    return out
