"""
Angular density fields on the L x L x M grid and the solver configuration.
"""

from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional

import numpy as np

from src.errors import ConfigError, GridMismatchError
from src.lattice import InitialProfile, bin_centers, direction
from src.observables import cell_labels


@dataclass(frozen=True)
class PdeConfig:
    """
    cells: L, grid spacing h = 1/L
    bins: M angle bins centered at 2 pi k / M
    dt: requested time step (refused if above the stability bound)
    gamma_samples: Monte Carlo draws per cell for the continuum creation term
    limiter: MUSCL/minmod upwinding of the drift flux
    reaction: include the creation term Gamma
    two_type: angles restricted to {0, pi}; requires bins == 2
    scheme: "euler" or "heun"
    """

    cells: int
    bins: int
    dt: float
    drift: float = 0.0
    beta: float = 0.0
    horizon: float = 1.0
    ds_table: Optional[str] = None
    gamma_samples: int = 256
    limiter: bool = False
    reaction: bool = True
    two_type: bool = False
    scheme: str = "euler"
    cfl: float = 0.25

    def __post_init__(self):
        issues = []
        if self.cells < 3:
            issues.append(("cells", f"must be >= 3, got {self.cells}"))
        if self.bins < 1:
            issues.append(("bins", f"must be >= 1, got {self.bins}"))
        if self.two_type and self.bins != 2:
            issues.append(("bins", "two-type fields need exactly 2 bins"))
        if self.dt <= 0:
            issues.append(("dt", f"must be > 0, got {self.dt}"))
        if self.drift < 0 or self.beta < 0:
            issues.append(("drift", "lambda and beta must be >= 0"))
        if self.horizon < 0:
            issues.append(("horizon", "must be >= 0"))
        if self.gamma_samples < 1:
            issues.append(("gamma_samples", "must be >= 1"))
        if self.scheme not in ("euler", "heun"):
            issues.append(("scheme", f"unknown scheme '{self.scheme}'"))
        if issues:
            raise ConfigError("invalid PDE configuration", issues)

    @property
    def h(self) -> float:
        return 1.0 / self.cells

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class AngularDensityField:
    """Bin masses rho_hat(u, bin), shape (L, L, M), at time `time`."""

    masses: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        self.masses = np.asarray(self.masses, dtype=np.float64)
        if self.masses.ndim != 3 or self.masses.shape[0] != self.masses.shape[1]:
            raise GridMismatchError(f"field must have shape (L, L, M), got {self.masses.shape}")

    @property
    def cells(self) -> int:
        return self.masses.shape[0]

    @property
    def bins(self) -> int:
        return self.masses.shape[-1]

    @property
    def density(self) -> np.ndarray:
        return self.masses.sum(axis=-1)

    @property
    def total_mass(self) -> float:
        """Integral of rho over the unit torus."""
        return float(self.density.sum()) / self.cells**2

    def copy(self) -> "AngularDensityField":
        return AngularDensityField(self.masses.copy(), self.time)

    def check_compatible(self, other: "AngularDensityField"):
        if self.masses.shape != other.masses.shape:
            raise GridMismatchError(f"grids differ: {self.masses.shape} vs {other.masses.shape}")

    # -------------------------------------------------------------------------
    # constructors
    # -------------------------------------------------------------------------

    @classmethod
    def uniform(cls, cells: int, bins: int, rho: float) -> "AngularDensityField":
        return cls(np.full((cells, cells, bins), rho / bins))

    @classmethod
    def from_profile(
        cls,
        profile: InitialProfile,
        cells: int,
        bins: int,
        side: Optional[int] = None,
    ) -> "AngularDensityField":
        """
        Bin masses of an initial profile. With `side`, each cell holds the
        average of the profile over the lattice sites x/N of the matching
        block of the N-torus (the expected initial snapshot); otherwise the
        profile is evaluated at cell centers.
        """
        if side is None:
            u = (np.arange(cells) + 0.5) / cells
            u1, u2 = np.meshgrid(u, u, indexing="ij")
            return cls(profile.angle_masses(u1, u2, bins))
        labels = cell_labels(side, cells)
        u = np.arange(side) / side
        u1, u2 = np.meshgrid(u, u, indexing="ij")
        site_masses = profile.angle_masses(u1, u2, bins)
        ids = (labels[:, None] * cells + labels[None, :]).ravel()
        sizes = np.bincount(ids, minlength=cells * cells)
        out = np.empty((cells * cells, bins))
        flat = site_masses.reshape(-1, bins)
        for k in range(bins):
            out[:, k] = np.bincount(ids, weights=flat[:, k], minlength=cells * cells) / sizes
        return cls(out.reshape(cells, cells, bins))

    @classmethod
    def two_type(cls, plus: np.ndarray, minus: np.ndarray, time: float = 0.0) -> "AngularDensityField":
        return cls(np.stack([plus, minus], axis=-1), time)


def bin_directions(bins: int) -> np.ndarray:
    """(M, 2) unit vectors at the bin centers, exact for the axis directions."""
    return np.stack(direction(bin_centers(bins)), axis=-1)


def dirichlet_energy(rho: np.ndarray) -> float:
    """Sum over cells and axes of |forward difference of rho / h|^2 h^2."""
    rho = np.asarray(rho, dtype=np.float64)
    return float(sum(np.sum((np.roll(rho, -1, axis=a) - rho) ** 2) for a in (0, 1)))

