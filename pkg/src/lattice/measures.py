"""
Measures on the angle circle and density profiles.

- AngleMeasure: grand-canonical parameter (atoms or histogram), mass <= 1.
- CanonicalState: particle count and angle multiset of a box B_l.
- InitialProfile: zeta_hat(u, theta), with total density < 1 everywhere.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss

from src.errors import LatticeError, ProfileError

from .angles import TWO_PI, angle_bin, bin_centers, bin_edges, wrap_angle

MASS_TOLERANCE = 1e-12


# =============================================================================
# GRAND-CANONICAL PARAMETER
# =============================================================================


@dataclass(frozen=True, eq=False)
class AngleMeasure:
    """
    Nonnegative measure on [0, 2pi) with total mass alpha <= 1.

    Atomic form: `angles` are atom locations. Histogram form: `weights[k]` is
    spread uniformly over bin k (centered on angles[k] = 2*pi*k/M).
    """

    angles: np.ndarray
    weights: np.ndarray
    histogram: bool = False

    def __post_init__(self):
        if self.angles.shape != self.weights.shape or self.angles.ndim != 1:
            raise LatticeError("angles and weights must be matching 1-d arrays")
        if np.any(self.weights < 0):
            raise LatticeError("measure weights must be nonnegative")
        if self.mass > 1.0 + MASS_TOLERANCE:
            raise LatticeError(f"measure mass {self.mass} exceeds 1")

    @classmethod
    def atomic(cls, angles: Sequence[float], weights: Sequence[float]) -> "AngleMeasure":
        a = wrap_angle(np.asarray(angles, dtype=np.float64).reshape(-1))
        w = np.asarray(weights, dtype=np.float64).reshape(-1)
        return cls(np.asarray(a, dtype=np.float64), w, histogram=False)

    @classmethod
    def from_histogram(cls, weights: Sequence[float]) -> "AngleMeasure":
        w = np.asarray(weights, dtype=np.float64).reshape(-1)
        return cls(bin_centers(w.size), w, histogram=True)

    @classmethod
    def uniform(cls, alpha: float, n_bins: int = 1) -> "AngleMeasure":
        """alpha times the uniform law; the measure of mu*_alpha."""
        return cls.from_histogram(np.full(n_bins, alpha / n_bins))

    @classmethod
    def zero(cls) -> "AngleMeasure":
        return cls.atomic([], [])

    @property
    def mass(self) -> float:
        return float(self.weights.sum())

    @property
    def bin_width(self) -> float:
        return TWO_PI / self.weights.size if self.histogram else 0.0

    def quadrature(self, nodes_per_bin: int = 16):
        """
        Points and weights with sum(w * g(p)) = integral of g.

        Exact for atoms; Gauss-Legendre inside each bin for histograms.
        """
        if not self.histogram:
            return self.angles.copy(), self.weights.copy()
        x, wx = leggauss(nodes_per_bin)
        half = 0.5 * self.bin_width
        points = self.angles[:, None] + half * x[None, :]
        weights = self.weights[:, None] * (0.5 * wx)[None, :]
        return wrap_angle(points.ravel()), weights.ravel()

    def integrate(self, g: Callable, nodes_per_bin: int = 16) -> float:
        points, weights = self.quadrature(nodes_per_bin)
        if points.size == 0:
            return 0.0
        return float(np.sum(weights * np.asarray(g(points), dtype=np.float64)))

    def binned(self, n_bins: int) -> np.ndarray:
        """Masses of the n_bins centered angle bins."""
        if not self.histogram:
            out = np.zeros(n_bins)
            if self.angles.size:
                np.add.at(out, angle_bin(self.angles, n_bins), self.weights)
            return out
        if self.weights.size == n_bins:
            return self.weights.copy()
        edges = bin_edges(n_bins)
        cumulative = self._cumulative(edges)
        return np.diff(cumulative)

    def _cumulative(self, x: np.ndarray) -> np.ndarray:
        """Mass of the arc [e0, x), extended periodically; e0 = first bin edge."""
        m = self.weights.size
        width = TWO_PI / m
        e0 = -0.5 * width
        shift = np.asarray(x, dtype=np.float64) - e0
        turns = np.floor(shift / TWO_PI)
        rest = shift - TWO_PI * turns
        j = np.minimum((rest // width).astype(np.int64), m - 1)
        before = np.concatenate([[0.0], np.cumsum(self.weights)])[j]
        return turns * self.mass + before + self.weights[j] / width * (rest - j * width)

    def sample_angles(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Draw `size` angles from the normalized law alpha_hat / alpha."""
        if size == 0:
            return np.zeros(0)
        if self.mass <= 0.0:
            raise LatticeError("cannot sample angles from a zero measure")
        p = self.weights / self.weights.sum()
        idx = rng.choice(self.weights.size, size=size, p=p)
        if not self.histogram:
            return self.angles[idx]
        offsets = (rng.random(size) - 0.5) * self.bin_width
        return wrap_angle(self.angles[idx] + offsets)


# =============================================================================
# CANONICAL STATES
# =============================================================================


@dataclass(frozen=True)
class CanonicalState:
    """K particles with the given angle multiset in a box of half-width l."""

    half_width: int
    angles: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "angles", tuple(sorted(float(a) for a in self.angles)))
        if self.count > self.box_size:
            raise LatticeError(f"K={self.count} exceeds box size {self.box_size}")

    @property
    def count(self) -> int:
        return len(self.angles)

    @property
    def box_side(self) -> int:
        return 2 * self.half_width + 1

    @property
    def box_size(self) -> int:
        return self.box_side**2

    @property
    def has_two_holes(self) -> bool:
        return self.count <= self.box_size - 2

    def parameter(self) -> AngleMeasure:
        """alpha_hat_K: the empirical angle measure, mass K/|B|."""
        n = self.count
        return AngleMeasure.atomic(self.angles, np.full(n, 1.0 / self.box_size))


# =============================================================================
# INITIAL PROFILES
# =============================================================================


@dataclass(frozen=True, eq=False)
class InitialProfile:
    """
    Macroscopic profile zeta_hat(u, theta) on [0,1)^2 x [0, 2pi).

    Either a continuous density `density(u1, u2, theta)` (vectorized,
    broadcasting) or atoms at fixed angles with `atom_masses(u1, u2)` giving
    the (..., n_atoms) masses.
    """

    name: str
    density: Optional[Callable] = None
    atoms: Optional[np.ndarray] = None
    atom_masses: Optional[Callable] = None
    resolution: int = 256

    @property
    def is_atomic(self) -> bool:
        return self.atoms is not None

    # -------------------------------------------------------------------------
    # constructors
    # -------------------------------------------------------------------------

    @classmethod
    def continuous(cls, density: Callable, name: str = "continuous", resolution: int = 256):
        return cls(name=name, density=density, resolution=resolution)

    @classmethod
    def uniform_angles(cls, rho: Callable, name: str = "uniform-angles"):
        """zeta_hat(u, theta) = rho(u) / 2pi."""

        def density(u1, u2, theta):
            return np.asarray(rho(u1, u2)) / TWO_PI + 0.0 * theta

        # one cell covers the circle; angle draws are exactly uniform
        return cls(name=name, density=density, resolution=1)

    @classmethod
    def constant(cls, alpha: float):
        return cls.uniform_angles(lambda u1, u2: alpha + 0.0 * (u1 + u2), name=f"constant-{alpha}")

    @classmethod
    def zero(cls):
        return cls.constant(0.0)

    @classmethod
    def two_type(cls, plus: Callable, minus: Callable, name: str = "two-type"):
        """Atoms at 0 (plus) and pi (minus) with the given spatial densities."""

        def masses(u1, u2):
            return np.stack(
                np.broadcast_arrays(np.asarray(plus(u1, u2)), np.asarray(minus(u1, u2))),
                axis=-1,
            )

        return cls(name=name, atoms=np.array([0.0, np.pi]), atom_masses=masses)

    @classmethod
    def from_table(cls, table: np.ndarray, name: str = "table"):
        """Piecewise-constant profile from (L, L, M) bin masses."""
        table = np.asarray(table, dtype=np.float64)
        if table.ndim != 3:
            raise ProfileError("profile table must have shape (L, L, M)")
        cells, _, m = table.shape
        width = TWO_PI / m

        def density(u1, u2, theta):
            i = np.floor(np.mod(u1, 1.0) * cells).astype(np.int64) % cells
            j = np.floor(np.mod(u2, 1.0) * cells).astype(np.int64) % cells
            k = angle_bin(theta, m)
            return table[i, j, k] / width

        return cls(name=name, density=density, resolution=m)

    # -------------------------------------------------------------------------
    # evaluation
    # -------------------------------------------------------------------------

    def angle_masses(self, u1, u2, n_bins: int, subdivisions: int = 16) -> np.ndarray:
        """Masses of the n_bins centered angle bins at positions (u1, u2)."""
        u1 = np.asarray(u1, dtype=np.float64)
        u2 = np.asarray(u2, dtype=np.float64)
        if self.is_atomic:
            masses = np.asarray(self.atom_masses(u1, u2), dtype=np.float64)
            out = np.zeros(masses.shape[:-1] + (n_bins,))
            for a, k in enumerate(angle_bin(self.atoms, n_bins)):
                out[..., k] += masses[..., a]
            return out
        width = TWO_PI / n_bins
        offsets = width * ((np.arange(subdivisions) + 0.5) / subdivisions - 0.5)
        theta = (bin_centers(n_bins)[:, None] + offsets[None, :]).ravel()
        values = self.density(u1[..., None], u2[..., None], theta)
        values = np.broadcast_to(values, u1.shape + theta.shape)
        values = values.reshape(u1.shape + (n_bins, subdivisions))
        return values.sum(axis=-1) * (width / subdivisions)

    def cell_masses(self, u1, u2) -> np.ndarray:
        """Masses on the profile's own sampling cells (atoms for atomic profiles)."""
        if self.is_atomic:
            return np.asarray(self.atom_masses(np.asarray(u1), np.asarray(u2)), dtype=np.float64)
        return self.angle_masses(u1, u2, self.resolution, subdivisions=4)

    def mass(self, u1, u2) -> np.ndarray:
        """zeta(u) = integral of zeta_hat(u, .) over the circle."""
        return self.cell_masses(u1, u2).sum(axis=-1)

    def check(self, side: Optional[int] = None, fine: int = 128):
        """Raise ProfileError unless 0 <= zeta_hat and zeta < 1 on the lattice and a fine grid."""
        grids = [fine] + ([side] if side else [])
        for n in grids:
            u = np.arange(n) / n
            u1, u2 = np.meshgrid(u, u, indexing="ij")
            masses = self.cell_masses(u1, u2)
            if np.any(masses < 0):
                raise ProfileError(f"profile '{self.name}' takes negative values")
            top = float(masses.sum(axis=-1).max())
            if top >= 1.0:
                raise ProfileError(
                    f"profile '{self.name}' reaches total density {top:.6f} >= 1"
                )

    def draw_angles(self, rng: np.random.Generator, masses: np.ndarray) -> np.ndarray:
        """
        One angle per row of `masses` (rows = occupied sites, columns = cells),
        drawn from the conditional law zeta_hat / zeta.
        """
        n = masses.shape[0]
        if n == 0:
            return np.zeros(0)
        cdf = np.cumsum(masses, axis=1)
        cdf /= cdf[:, -1:]
        u = rng.random(n)
        idx = np.minimum((cdf < u[:, None]).sum(axis=1), masses.shape[1] - 1)
        if self.is_atomic:
            return self.atoms[idx]
        width = TWO_PI / self.resolution
        centers = bin_centers(self.resolution)
        return wrap_angle(centers[idx] + (rng.random(n) - 0.5) * width)
