"""
Tagged-particle estimate of the SSEP self-diffusion coefficient.

d_s(rho) := lim E[X_1(t)^2] / (2t) in microscopic time, i.e.
E[X_1(T)^2] / (2 N^2 T) in the macroscopic time of the simulator, which
pins d_s(0) = 1. The raw "/t" value (twice that) is reported alongside.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional

import numpy as np

from src.dynamics import ModelParams, SimulationState, advance
from src.lattice import Configuration, InitialProfile, TorusGeometry, sample_product_measure
from src.lattice.sampling import SeedLike, as_generator

logger = logging.getLogger(__name__)

# half-width of the box used for the environment density around the tracer
ENVIRONMENT_HALF_WIDTH = 2


@dataclass
class DsEstimate:
    rho: float
    side: int
    horizon: float
    replicas: int
    estimate: float
    stderr: float
    per_axis: tuple
    per_axis_stderr: tuple
    environment_density: float
    environment_stderr: float

    @property
    def raw(self) -> float:
        """The same estimate without the factor 2 in the normalization."""
        return 2.0 * self.estimate

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["raw"] = self.raw
        return data


def jackknife(values: np.ndarray):
    """Leave-one-out jackknife mean and standard error along axis 0."""
    values = np.asarray(values, dtype=np.float64)
    n = values.shape[0]
    mean = values.mean(axis=0)
    if n < 2:
        return mean, np.zeros_like(mean)
    loo = (values.sum(axis=0) - values) / (n - 1)
    se = np.sqrt((n - 1) / n * ((loo - loo.mean(axis=0)) ** 2).sum(axis=0))
    return mean, se


def palm_configuration(rho: float, side: int, rng: np.random.Generator) -> Configuration:
    """Bernoulli(rho) on the N-torus conditioned on the origin being occupied."""
    geometry = TorusGeometry(side)
    if rho > 0:
        config = sample_product_measure(InitialProfile.constant(rho), geometry, rng)
        occupancy, angle = config.occupancy.copy(), config.angle.copy()
    else:
        occupancy, angle = np.zeros(geometry.n_sites, dtype=np.uint8), np.zeros(geometry.n_sites)
    occupancy[0] = 1
    return Configuration.from_arrays(geometry, occupancy, angle)


def _replica(rho: float, side: int, horizon: float, rng: np.random.Generator) -> np.ndarray:
    config = palm_configuration(rho, side, rng)
    state = SimulationState.start(config, ModelParams(side=side, horizon=horizon), rng=rng).tag(0)
    state = advance(state, horizon)

    box = state.config.geometry.box_sites(state.tracer.site, ENVIRONMENT_HALF_WIDTH)
    neighbours = int(state.config.occupancy[box].sum()) - 1
    environment = neighbours / (box.size - 1)
    x1, x2 = state.tracer.displacement.astype(np.float64)
    return np.array([x1 * x1, x2 * x2, environment])


def estimate_ds(
    rho: float,
    side: int,
    horizon: float,
    replicas: int,
    seed: SeedLike = None,
    workers: Optional[int] = None,
) -> DsEstimate:
    """
    Run `replicas` independent tagged SSEP runs (lambda = beta = 0) started
    from Bernoulli(rho) with the tracer at the origin, up to macroscopic time
    `horizon`, and return the normalized MSD slope with jackknife errors.
    """
    if not 0.0 <= rho <= 1.0:
        raise ValueError(f"rho must lie in [0, 1], got {rho}")
    if replicas < 1 or horizon <= 0:
        raise ValueError("need replicas >= 1 and horizon > 0")
    if side < 2 * ENVIRONMENT_HALF_WIDTH + 1:
        raise ValueError(f"side {side} too small for the environment box")

    if rho == 1.0:
        # a full lattice blocks every jump
        return DsEstimate(rho, side, horizon, replicas, 0.0, 0.0, (0.0, 0.0), (0.0, 0.0), 1.0, 0.0)

    children = as_generator(seed).spawn(replicas)
    with ThreadPoolExecutor(max_workers=workers or 1) as pool:
        rows = list(pool.map(lambda g: _replica(rho, side, horizon, g), children))
    samples = np.array(rows)

    scale = 2.0 * side * side * horizon
    axis_mean, axis_se = jackknife(samples[:, :2] / scale)
    estimate, stderr = jackknife(samples[:, :2].mean(axis=1) / scale)
    env_mean, env_se = jackknife(samples[:, 2])

    logger.debug(
        "d_s(%.3f) = %.4f +- %.4f (N=%d, T=%g, %d replicas)",
        rho, estimate, stderr, side, horizon, replicas,
    )
    return DsEstimate(
        rho=rho,
        side=side,
        horizon=horizon,
        replicas=replicas,
        estimate=float(estimate),
        stderr=float(stderr),
        per_axis=(float(axis_mean[0]), float(axis_mean[1])),
        per_axis_stderr=(float(axis_se[0]), float(axis_se[1])),
        environment_density=float(env_mean),
        environment_stderr=float(env_se),
    )
