"""
Jump rates and the Glauber alignment law.

Exchange: a particle at x with angle theta jumps to x + delta e_i at rate
N^2 (1 + delta lambda_i(theta) / N) if the target is empty, with
lambda_1 = lambda cos(theta), lambda_2 = lambda sin(theta).

Glauber: the particle at x redraws its angle from
c(theta) = exp(beta sum_{y~x} eta_y cos(theta_y - theta)) / Z. Writing the
neighbour sum as R cos(theta - phi), c is the von Mises density with
location phi and concentration beta R, Z = 2 pi I0(beta R). In two-type mode
the law is renormalized on the atoms {0, pi}.
"""

from typing import Tuple

import numpy as np
from scipy.special import expit, i0e

from src.errors import LatticeError
from src.lattice import TWO_PI, Configuration, direction, wrap_angle

from .params import ModelParams


def drift_components(theta, drift: float):
    """(lambda_1(theta), lambda_2(theta))."""
    c, s = direction(theta)
    return drift * c, drift * s


def jump_rate(config: Configuration, params: ModelParams, site: int, axis: int, delta: int) -> float:
    if not config.is_occupied(site):
        raise LatticeError(f"jump_rate from empty site {site}")
    target = config.geometry.neighbor(site, axis, delta)
    if config.occupancy[target]:
        return 0.0
    n = params.side
    lam = drift_components(config.angle[site], params.drift)[axis]
    return float(n * n * (1.0 + delta * lam / n))


def resultant(config: Configuration, site: int) -> Tuple[float, float]:
    """Sum over the 4 neighbours (with multiplicity) of eta_y (cos theta_y, sin theta_y)."""
    nbrs = config.geometry.neighbor_table[site]
    occupied = config.occupancy[nbrs] == 1
    c, s = direction(config.angle[nbrs])
    return float(np.sum(c[occupied])), float(np.sum(s[occupied]))


def von_mises_parameters(config: Configuration, site: int, beta: float) -> Tuple[float, float]:
    """(location phi, concentration beta R) of the alignment law at `site`."""
    sx, sy = resultant(config, site)
    return float(np.arctan2(sy, sx)), beta * float(np.hypot(sx, sy))


def glauber_density(config: Configuration, site: int, theta, beta: float):
    """c_{x,beta}(theta, eta) for the continuum-angle model (vectorized in theta)."""
    if not config.is_occupied(site):
        raise LatticeError(f"glauber_density at empty site {site}")
    phi, kappa = von_mises_parameters(config, site, beta)
    # i0e(k) = exp(-k) I0(k): exp(k cos - k) / i0e(k) never overflows
    return np.exp(kappa * (np.cos(np.asarray(theta) - phi) - 1.0)) / (TWO_PI * i0e(kappa))


def two_type_weights(config: Configuration, site: int, beta: float) -> np.ndarray:
    """Flip law on the atoms (0, pi): proportional to exp(+-beta m_x)."""
    m, _ = resultant(config, site)
    p_plus = float(expit(2.0 * beta * m))
    return np.array([p_plus, 1.0 - p_plus])


def glauber_law(config: Configuration, site: int, params: ModelParams, quadrature: int = 4096):
    """
    Nodes and weights with sum(w * F(nodes)) = integral of c(theta) F(theta):
    periodic trapezoid rule in the continuum, the two atoms in two-type mode.
    """
    if params.two_type:
        return np.array([0.0, np.pi]), two_type_weights(config, site, params.beta)
    nodes = TWO_PI * np.arange(quadrature) / quadrature
    weights = glauber_density(config, site, nodes, params.beta) * (TWO_PI / quadrature)
    return nodes, weights


def sample_glauber_angle(
    config: Configuration,
    site: int,
    params: ModelParams,
    rng: np.random.Generator,
) -> float:
    """Exact draw from the alignment law at an occupied site."""
    if not config.is_occupied(site):
        raise LatticeError(f"sample_glauber_angle at empty site {site}")
    if params.two_type:
        p_plus = two_type_weights(config, site, params.beta)[0]
        return 0.0 if rng.random() < p_plus else float(np.pi)
    phi, kappa = von_mises_parameters(config, site, params.beta)
    # numpy's sampler is Best-Fisher rejection; returns values in [-pi, pi]
    return float(wrap_angle(rng.vonmises(phi, kappa)))
