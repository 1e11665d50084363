"""
Distance on grand-canonical parameters.

|||a - b||| = sup { integral of g d(a - b) : ||g||_inf <= 1, ||g'||_inf <= 1 },
g periodic. The sup is taken over a finite admissible family:

- constants +-1 (the mass difference);
- r cos(k(theta - phi)) with r = min(1, 1/k), k = 1..trig_order, whose best
  phase gives min(1, 1/k) |nu_hat(k)|;
- cones clip(d(theta, c) - h, -1, 1) with c on an M-grid and h on a grid of
  spacing 2pi/M, d the circular distance.

Each member is admissible, so the result is a lower bound of the true norm;
it is a maximum of seminorms, hence symmetric and subadditive, and it
increases to the true value as M grows.
"""

import numpy as np

from .angles import TWO_PI
from .measures import AngleMeasure


def _signed_points(a: AngleMeasure, b: AngleMeasure, nodes_per_bin: int):
    pa, wa = a.quadrature(nodes_per_bin)
    pb, wb = b.quadrature(nodes_per_bin)
    return np.concatenate([pa, pb]), np.concatenate([wa, -wb])


def circular_distance(x, y):
    d = np.abs(np.mod(np.asarray(x) - np.asarray(y), TWO_PI))
    return np.minimum(d, TWO_PI - d)


def param_distance(
    a: AngleMeasure,
    b: AngleMeasure,
    resolution: int = 256,
    trig_order: int = 16,
    nodes_per_bin: int = 16,
) -> float:
    points, weights = _signed_points(a, b, nodes_per_bin)
    if points.size == 0:
        return 0.0

    best = abs(float(weights.sum()))

    k = np.arange(1, trig_order + 1)
    fourier = np.abs(np.exp(1j * np.outer(k, points)) @ weights)
    best = max(best, float(np.max(np.minimum(1.0, 1.0 / k) * fourier)))

    centers = TWO_PI * np.arange(resolution) / resolution
    dist = circular_distance(centers[:, None], points[None, :])
    for h in np.arange(-1.0, np.pi + 1.0, TWO_PI / resolution):
        values = np.clip(dist - h, -1.0, 1.0) @ weights
        best = max(best, float(np.max(np.abs(values))))
    return best
