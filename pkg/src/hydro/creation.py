"""
Creation term Gamma(rho_hat) = rho E[c_{0,beta}(theta, eta_hat)] - rho_hat.

The expectation is over the four neighbours of the origin drawn i.i.d. from
the local equilibrium: occupied with probability rho, angle law rho_hat / rho
(bin centers). Continuum angles use seeded Monte Carlo with common random
numbers across cells and the von Mises law of each draw integrated over the
bins; the two-type model enumerates the 3^4 neighbour states exactly.
"""

import itertools

import numpy as np
from scipy.special import expit

from src.lattice import TWO_PI, bin_centers

from .field import bin_directions

N_NEIGHBOURS = 4
NODES_PER_BIN = 8
CELL_CHUNK = 64

# (81, 4) neighbour states: 0 empty, 1 plus, 2 minus
_TWO_TYPE_STATES = np.array(list(itertools.product(range(3), repeat=N_NEIGHBOURS)))
_TWO_TYPE_M = (_TWO_TYPE_STATES == 1).sum(axis=1) - (_TWO_TYPE_STATES == 2).sum(axis=1)


def _project(gamma: np.ndarray) -> np.ndarray:
    return gamma - gamma.sum(axis=-1, keepdims=True) / gamma.shape[-1]


def von_mises_bin_masses(kappa: np.ndarray, mu: np.ndarray, bins: int) -> np.ndarray:
    """Bin masses of the von Mises(mu, kappa) law, normalized to sum to 1; shape (..., M)."""
    width = TWO_PI / bins
    offsets = width * ((np.arange(NODES_PER_BIN) + 0.5) / NODES_PER_BIN - 0.5)
    theta = bin_centers(bins)[:, None] + offsets[None, :]
    kappa = np.asarray(kappa, dtype=np.float64)[..., None, None]
    mu = np.asarray(mu, dtype=np.float64)[..., None, None]
    weights = np.exp(kappa * (np.cos(theta - mu) - 1.0)).sum(axis=-1)
    return weights / weights.sum(axis=-1, keepdims=True)


def flip_law(m: np.ndarray, beta: float) -> np.ndarray:
    """Two-type Glauber law (P(+), P(-)) given m = n_plus - n_minus; shape (..., 2)."""
    plus = expit(2.0 * beta * np.asarray(m, dtype=np.float64))
    return np.stack([plus, 1.0 - plus], axis=-1)


def creation_uniform(masses: np.ndarray) -> np.ndarray:
    """beta = 0: c = 1/2pi, so Gamma_k = rho / M - rho_hat_k."""
    rho = masses.sum(axis=-1, keepdims=True)
    return rho / masses.shape[-1] - masses


def creation_two_type_exact(masses: np.ndarray, beta: float) -> np.ndarray:
    """Exact two-type Gamma by enumeration of the 81 neighbour states."""
    if masses.shape[-1] != 2:
        raise ValueError("two-type creation needs exactly 2 bins")
    rho = masses.sum(axis=-1)
    probs = np.stack([1.0 - rho, masses[..., 0], masses[..., 1]], axis=-1)
    # P(state) for every cell: product over the four neighbours
    state_probs = np.prod(probs[..., _TWO_TYPE_STATES], axis=-1)
    law = state_probs @ flip_law(_TWO_TYPE_M, beta)
    return _project(rho[..., None] * law - masses)


def creation_monte_carlo(
    masses: np.ndarray,
    beta: float,
    samples: int,
    rng: np.random.Generator,
    two_type: bool = False,
):
    """Monte Carlo Gamma and its per-bin standard error, both shaped like `masses`."""
    if samples < 1:
        raise ValueError(f"need at least one sample, got {samples}")
    shape = masses.shape
    bins = shape[-1]
    flat = masses.reshape(-1, bins)
    rho = flat.sum(axis=-1)
    directions = bin_directions(bins)

    # common random numbers shared by every cell
    u_occupied = rng.random((samples, N_NEIGHBOURS))
    u_angle = rng.random((samples, N_NEIGHBOURS))

    mean = np.empty_like(flat)
    err = np.empty_like(flat)
    for start in range(0, flat.shape[0], CELL_CHUNK):
        chunk = slice(start, start + CELL_CHUNK)
        r = rho[chunk]
        cdf = np.cumsum(flat[chunk], axis=-1) / np.where(r > 0, r, 1.0)[:, None]
        occupied = u_occupied[None] < r[:, None, None]
        idx = (cdf[:, None, None, :] < u_angle[None, :, :, None]).sum(axis=-1)
        idx = np.minimum(idx, bins - 1)
        resultant = (occupied[..., None] * directions[idx]).sum(axis=2)
        if two_type:
            law = flip_law(resultant[..., 0], beta)
        else:
            kappa = beta * np.hypot(resultant[..., 0], resultant[..., 1])
            mu = np.arctan2(resultant[..., 1], resultant[..., 0])
            law = von_mises_bin_masses(kappa, mu, bins)
        mean[chunk] = r[:, None] * law.mean(axis=1) - flat[chunk]
        spread = law.std(axis=1, ddof=1) if samples > 1 else np.zeros_like(law[:, 0])
        err[chunk] = r[:, None] * spread / np.sqrt(samples)
    return _project(mean).reshape(shape), err.reshape(shape)


def creation_rate(
    masses: np.ndarray,
    beta: float,
    samples: int = 256,
    rng: np.random.Generator = None,
    two_type: bool = False,
) -> np.ndarray:
    """Gamma per bin; bins sum to zero in every cell."""
    masses = np.asarray(masses, dtype=np.float64)
    if samples < 1:
        raise ValueError(f"need at least one sample, got {samples}")
    if beta == 0.0:
        return creation_uniform(masses)
    if two_type:
        return creation_two_type_exact(masses, beta)
    if rng is None:
        rng = np.random.default_rng(0)
    gamma, _ = creation_monte_carlo(masses, beta, samples, rng)
    return gamma
