"""
Instantaneous currents across the bond (x, x + e_i) and the alignment rate.

    j^w_i     = eta^w_x (1 - eta_{x+e_i}) - eta^w_{x+e_i} (1 - eta_x)
    jt^w_i    = eta^{w lambda_i}_x (1 - eta_{x+e_i}) + eta^{w lambda_i}_{x+e_i} (1 - eta_x)
    gamma^w   = eta_x integral c_{x,beta}(theta) (w(theta) - w(theta_x)) dtheta

With these, L eta^w_x = sum_i (tau_{x-e_i} j^w_i - tau_x j^w_i) and the same
decomposition holds for L^WA with jt.
"""

import numpy as np

from src.lattice import Configuration

from .params import ModelParams
from .rates import drift_components, glauber_law


def _pair(config: Configuration, site: int, axis: int):
    other = config.geometry.neighbor(site, axis, 1)
    return other, int(config.occupancy[site]), int(config.occupancy[other])


def current_sym(config: Configuration, site: int, axis: int, omega) -> float:
    other, ex, ey = _pair(config, site, axis)
    wx = float(omega(config.angle[site])) * ex
    wy = float(omega(config.angle[other])) * ey
    return wx * (1 - ey) - wy * (1 - ex)


def current_asym(config: Configuration, site: int, axis: int, omega, drift: float) -> float:
    other, ex, ey = _pair(config, site, axis)
    lx = drift_components(config.angle[site], drift)[axis]
    ly = drift_components(config.angle[other], drift)[axis]
    wx = float(omega(config.angle[site]) * lx) * ex
    wy = float(omega(config.angle[other]) * ly) * ey
    return wx * (1 - ey) + wy * (1 - ex)


def alignment_rate(
    config: Configuration,
    site: int,
    omega,
    params: ModelParams,
    quadrature: int = 4096,
) -> float:
    if not config.occupancy[site]:
        return 0.0
    nodes, weights = glauber_law(config, site, params, quadrature)
    own = float(omega(config.angle[site]))
    return float(np.sum(weights * (np.asarray(omega(nodes), dtype=np.float64) - own)))
