"""
Martingale of the empirical measure against a smooth test function.

For pi^N_t = N^-2 sum_x eta_x delta_{(x/N, theta_x)} and H(t, u, theta),

    M_T = <pi_T, H_T> - <pi_0, H_0> - int_0^T (d_t + L_N) <pi_t, H_t> dt.

The compensator covers the exclusion exchanges with their drift. The
alignment part is left out, which is exact for test functions that do not
depend on theta. E[M_T^2] is O(N^-2); `martingale_variance_slope` measures
that exponent over several lattice sides.
"""

import logging
from dataclasses import dataclass
from typing import Callable, List, Sequence

import numpy as np
from scipy.integrate import trapezoid

from src.dynamics import ModelParams, SimulationState, advance
from src.lattice import (
    DIRECTIONS,
    Configuration,
    InitialProfile,
    TorusGeometry,
    direction,
    sample_product_measure,
)
from src.lattice.sampling import SeedLike, as_generator

from .weakform import TestFunction

logger = logging.getLogger(__name__)


def _particle_arguments(config: Configuration):
    n = config.side
    sites = np.flatnonzero(config.occupancy)
    rows, cols = np.divmod(sites, n)
    return sites, rows / n, cols / n, config.angle[sites]


def empirical_pairing(config: Configuration, t: float, fn: Callable) -> float:
    """<pi^N_t, fn(t)> = N^-2 sum_x eta_x fn(t, x/N, theta_x)."""
    _, u1, u2, theta = _particle_arguments(config)
    return float(np.sum(fn(t, u1, u2, theta))) / config.side**2


def exchange_compensator(config: Configuration, t: float, H: TestFunction, drift: float = 0.0) -> float:
    """
    L_N <pi_t, H_t> for the exchange part: every particle jumps to an empty
    neighbour at rate N^2 (1 + delta lambda_i(theta) / N).
    """
    n = config.side
    sites, u1, u2, theta = _particle_arguments(config)
    here = H.value(t, u1, u2, theta)
    lam = np.stack(direction(theta)) * drift
    total = 0.0
    for k, (axis, delta) in enumerate(DIRECTIONS):
        empty = config.occupancy[config.geometry.neighbor_table[sites, k]] == 0
        shifted = (u1 + delta / n, u2) if axis == 0 else (u1, u2 + delta / n)
        gain = H.value(t, *shifted, theta) - here
        rate = n * n * (1.0 + delta * lam[axis] / n)
        total += float(np.sum(np.where(empty, rate * gain, 0.0)))
    return total / n**2


def martingale_increment(
    path: Sequence[Configuration],
    times: Sequence[float],
    H: TestFunction,
    drift: float = 0.0,
) -> float:
    """M_T along one sampled path; the compensator integral is the trapezoid rule over `times`."""
    times = np.asarray(times, dtype=np.float64)
    if len(path) != times.size or times.size < 2:
        raise ValueError("need one configuration per time and at least two times")
    integrand = [
        empirical_pairing(config, t, H.dt) + exchange_compensator(config, t, H, drift)
        for config, t in zip(path, times)
    ]
    boundary = empirical_pairing(path[-1], times[-1], H.value) - empirical_pairing(path[0], times[0], H.value)
    return boundary - float(trapezoid(integrand, times))


@dataclass
class MartingaleSample:
    side: int
    values: np.ndarray

    @property
    def variance(self) -> float:
        return float(np.var(self.values, ddof=1))


def sample_martingale(
    params: ModelParams,
    profile: InitialProfile,
    H: TestFunction,
    replicas: int,
    slices: int = 21,
    seed: SeedLike = None,
) -> MartingaleSample:
    """M_T over independent replicas started from the product measure of `profile`."""
    if replicas < 2:
        raise ValueError(f"need at least two replicas, got {replicas}")
    geometry = TorusGeometry(params.side)
    times = np.linspace(0.0, params.horizon, slices)
    values = np.empty(replicas)
    for r, child in enumerate(as_generator(seed).spawn(replicas)):
        state = SimulationState.start(sample_product_measure(profile, geometry, child), params, rng=child)
        path = [state.config]
        for dt in np.diff(times):
            state = advance(state, float(dt))
            path.append(state.config)
        values[r] = martingale_increment(path, times, H, params.drift)
    logger.debug("martingale N=%d: variance %.3e over %d replicas", params.side, np.var(values, ddof=1), replicas)
    return MartingaleSample(side=params.side, values=values)


def martingale_variance_slope(samples: List[MartingaleSample]) -> float:
    """Least-squares slope of log Var(M_T) against log N."""
    sides = np.log([s.side for s in samples])
    variances = np.log([s.variance for s in samples])
    return float(np.polyfit(sides, variances, 1)[0])
