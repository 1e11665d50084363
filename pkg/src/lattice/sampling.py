"""
Samplers for product measures, grand-canonical and canonical measures.

Every sampler takes an explicit seed or numpy Generator and is deterministic
given it.
"""

from typing import Union

import numpy as np

from src.errors import LatticeError

from .configuration import Configuration
from .geometry import TorusGeometry
from .measures import AngleMeasure, CanonicalState, InitialProfile

SeedLike = Union[int, np.random.SeedSequence, np.random.Generator, None]


def as_generator(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def sample_product_measure(
    profile: InitialProfile,
    geometry: TorusGeometry,
    seed: SeedLike,
) -> Configuration:
    """
    Sample mu^N_zeta: independent sites, P(eta_x = 1) = zeta(x/N), angle law
    zeta_hat(x/N, .) / zeta(x/N).
    """
    if geometry.side < 2:
        raise LatticeError("product-measure sampling needs N >= 2")
    profile.check(side=geometry.side)
    rng = as_generator(seed)

    n = geometry.side
    u = np.arange(n) / n
    u1, u2 = np.meshgrid(u, u, indexing="ij")
    masses = profile.cell_masses(u1, u2).reshape(geometry.n_sites, -1)
    total = masses.sum(axis=1)

    occupancy = (rng.random(geometry.n_sites) < total).astype(np.uint8)
    angle = np.zeros(geometry.n_sites)
    occupied = np.flatnonzero(occupancy)
    angle[occupied] = profile.draw_angles(rng, masses[occupied])
    return Configuration.from_arrays(geometry, occupancy, angle)


def sample_grand_canonical(
    alpha_hat: AngleMeasure,
    box_side: int,
    seed: SeedLike,
) -> Configuration:
    """Sample mu_alpha_hat on a box_side x box_side torus."""
    rng = as_generator(seed)
    geometry = TorusGeometry(box_side)
    occupancy = (rng.random(geometry.n_sites) < alpha_hat.mass).astype(np.uint8)
    angle = np.zeros(geometry.n_sites)
    occupied = np.flatnonzero(occupancy)
    if occupied.size:
        angle[occupied] = alpha_hat.sample_angles(rng, occupied.size)
    return Configuration.from_arrays(geometry, occupancy, angle)


def canonical_state_of(config: Configuration, center: int, half_width: int) -> CanonicalState:
    """Particle count and angle multiset of B_l(center)."""
    sites = config.geometry.box_sites(center, half_width)
    occupied = sites[config.occupancy[sites] == 1]
    return CanonicalState(half_width, tuple(config.angle[occupied]))


def condition_to_canonical(state: CanonicalState, seed: SeedLike) -> Configuration:
    """
    Sample mu_{l,K}: the K angles of `state` placed uniformly at random on
    distinct sites of the box (exchangeability of mu*_alpha makes this exact).

    The box is returned as a torus of side 2l+1.
    """
    rng = as_generator(seed)
    geometry = TorusGeometry(state.box_side)
    k = state.count
    if k > geometry.n_sites:
        raise LatticeError(f"K={k} exceeds box size {geometry.n_sites}")
    sites = rng.choice(geometry.n_sites, size=k, replace=False)
    occupancy = np.zeros(geometry.n_sites, dtype=np.uint8)
    angle = np.zeros(geometry.n_sites)
    occupancy[sites] = 1
    angle[sites] = np.asarray(state.angles, dtype=np.float64)[rng.permutation(k)]
    return Configuration.from_arrays(geometry, occupancy, angle)


def empirical_angular_density(config: Configuration, center: int, half_width: int) -> AngleMeasure:
    """rho_hat_l = |B_l|^{-1} sum_{x in B_l} eta_x delta_{theta_x}."""
    sites = config.geometry.box_sites(center, half_width)
    occupied = sites[config.occupancy[sites] == 1]
    return AngleMeasure.atomic(config.angle[occupied], np.full(occupied.size, 1.0 / sites.size))
