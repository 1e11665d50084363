"""
Angle conventions shared by the simulator, the observables and the PDE.

Angles are float radians in [0, 2pi). Binning uses M equal bins centered on
2*pi*k/M with left-closed edges, so M=2 bins are centered exactly on 0 and pi.
"""

import numpy as np

TWO_PI = 2.0 * np.pi

# two-type alphabet
PLUS = 0.0
MINUS = np.pi


def wrap_angle(theta):
    """Map any real angle(s) into [0, 2pi)."""
    wrapped = np.mod(theta, TWO_PI)
    # np.mod can return exactly 2pi for tiny negative inputs
    return np.where(wrapped >= TWO_PI, 0.0, wrapped)


def direction(theta):
    """
    Unit vector (cos, sin) of the given angle(s).

    Components below 1e-15 in magnitude are set to zero so that multiples of
    pi/2 give exact axis vectors (sin(pi) is 0, not 1.2e-16).
    """
    c = np.cos(theta)
    s = np.sin(theta)
    c = np.where(np.abs(c) < 1e-15, 0.0, c)
    s = np.where(np.abs(s) < 1e-15, 0.0, s)
    return c, s


def bin_centers(n_bins: int) -> np.ndarray:
    return TWO_PI * np.arange(n_bins) / n_bins


def bin_edges(n_bins: int) -> np.ndarray:
    """Left edges of the n_bins bins, first one negative (wraps around 0)."""
    return TWO_PI * (np.arange(n_bins + 1) - 0.5) / n_bins


def angle_bin(theta, n_bins: int):
    """Index of the bin containing theta."""
    idx = np.floor(np.asarray(theta) * n_bins / TWO_PI + 0.5).astype(np.int64)
    return np.mod(idx, n_bins)
