"""
Full-cluster statistic: fraction of sites x whose box B_p(x) holds at least
|B_p| - 1 particles, i.e. where the exchange dynamics inside the box loses
irreducibility.
"""

import numpy as np
from scipy import ndimage
from scipy.stats import binom

from src.errors import GridMismatchError
from src.lattice import Configuration


def box_counts(config: Configuration, p: int) -> np.ndarray:
    """Particle count of B_p(x) for every x (exact integer box sums)."""
    side = 2 * p + 1
    if p < 1 or side > config.side:
        raise GridMismatchError(f"box B_{p} does not fit in a torus of side {config.side}")
    kernel = np.ones((side, side), dtype=np.int64)
    return ndimage.convolve(config.occupancy_grid.astype(np.int64), kernel, mode="wrap")


def full_cluster_fraction(config: Configuration, p: int) -> float:
    size = (2 * p + 1) ** 2
    return float(np.mean(box_counts(config, p) >= size - 1))


def binomial_full_cluster_probability(alpha: float, p: int) -> float:
    """P(Binomial(|B_p|, alpha) >= |B_p| - 1), the i.i.d. value of the statistic."""
    size = (2 * p + 1) ** 2
    return float(binom.sf(size - 2, size, alpha))
