"""
Exact action of the generator on cylinder functions (test support only).

L_N f = N^2 L f + N L^WA f + L^G f with

    L f    = sum_x sum_|z|=1 eta_x (1 - eta_{x+z}) (f(eta^{x,x+z}) - f(eta))
    L^WA f = sum_x sum_|z|=1 delta lambda_i(theta_x) eta_x (1 - eta_{x+z}) (...)
    L^G f  = sum_x eta_x integral c_{x,beta}(theta) (f(eta^{x,theta}) - f(eta)) dtheta

`f` is a callable on Configuration; `support` (flat sites) restricts the
enumeration to moves that can change f.
"""

from typing import Callable, Iterator, Optional, Sequence, Tuple

import numpy as np

from src.lattice import DIRECTIONS, Configuration, set_angle, swap

from .params import ModelParams
from .rates import drift_components, glauber_law

CylinderFunction = Callable[[Configuration], float]


def _licit_exchanges(
    config: Configuration, support: Optional[Sequence[int]]
) -> Iterator[Tuple[int, int, int, int]]:
    """(x, y, axis, delta) for every particle x with empty neighbour y = x + delta e_axis."""
    table = config.geometry.neighbor_table
    keep = None if support is None else set(int(s) for s in support)
    for x in config.particles:
        for k, (axis, delta) in enumerate(DIRECTIONS):
            y = table[x, k]
            if config.occupancy[y]:
                continue
            if keep is not None and x not in keep and y not in keep:
                continue
            yield int(x), int(y), axis, delta


def symmetric_part(f: CylinderFunction, config: Configuration, support=None) -> float:
    base = f(config)
    return float(sum(f(swap(config, x, y)) - base for x, y, _, _ in _licit_exchanges(config, support)))


def asymmetric_part(f: CylinderFunction, config: Configuration, drift: float, support=None) -> float:
    base = f(config)
    total = 0.0
    for x, y, axis, delta in _licit_exchanges(config, support):
        lam = drift_components(config.angle[x], drift)[axis]
        total += delta * lam * (f(swap(config, x, y)) - base)
    return float(total)


def glauber_part(
    f: CylinderFunction,
    config: Configuration,
    params: ModelParams,
    quadrature: int = 4096,
    support=None,
) -> float:
    base = f(config)
    sites = config.particles if support is None else [s for s in support if config.occupancy[s]]
    total = 0.0
    for x in sites:
        nodes, weights = glauber_law(config, int(x), params, quadrature)
        values = np.array([f(set_angle(config, int(x), theta)) for theta in nodes])
        total += float(np.sum(weights * (values - base)))
    return total


def apply_generator(
    f: CylinderFunction,
    config: Configuration,
    params: ModelParams,
    quadrature: int = 4096,
    support=None,
) -> float:
    """(N^2 L + N L^WA) f exactly plus L^G f by quadrature."""
    n = params.side
    value = n * n * symmetric_part(f, config, support)
    if params.drift:
        value += n * asymmetric_part(f, config, params.drift, support)
    value += glauber_part(f, config, params, quadrature, support)
    return float(value)
