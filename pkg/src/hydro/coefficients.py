"""
Local coefficients of the hydrodynamic equation.

All functions act on a cell or on a whole grid at once: `masses` has the
bins on its last axis and `rho` is its bin sum. At rho = 0 the ratios
rho_hat / rho are replaced by 0, the continuous extension (every coefficient
carries a factor that vanishes there since d_s(0) = 1).
"""

import numpy as np

from src.selfdiff import DsTable

from .field import bin_directions


def angle_profile(masses: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """rho_hat / rho, zero where rho == 0."""
    rho = np.asarray(rho, dtype=np.float64)[..., None]
    safe = np.where(rho > 0, rho, 1.0)
    return np.where(rho > 0, masses / safe, 0.0)


def coeff_d(masses: np.ndarray, rho: np.ndarray, table: DsTable) -> np.ndarray:
    """(rho_hat / rho) (1 - d_s(rho)), per bin."""
    ds = np.asarray(table.ds(rho))[..., None]
    return angle_profile(masses, rho) * (1.0 - ds)


def coeff_s(masses: np.ndarray, rho: np.ndarray, table: DsTable) -> np.ndarray:
    """(rho_hat / rho) (1 - rho - d_s(rho)), per bin."""
    rho = np.asarray(rho, dtype=np.float64)
    ds = np.asarray(table.ds(rho))
    return angle_profile(masses, rho) * (1.0 - rho - ds)[..., None]


def omega_vector(masses: np.ndarray) -> np.ndarray:
    """Midpoint moment sum_k rho_hat_k (cos c_k, sin c_k); shape (..., 2)."""
    return masses @ bin_directions(masses.shape[-1])


def drift_velocity(masses: np.ndarray, rho: np.ndarray, table: DsTable, drift: float) -> np.ndarray:
    """
    V_k = 2 lambda [(1 - rho - d_s) Omega / rho + d_s e_k], shape (..., M, 2),
    so that the drift flux of bin k is rho_hat_k V_k = 2 lambda (s_k Omega + d_s rho_hat_k e_k).
    """
    rho = np.asarray(rho, dtype=np.float64)
    ds = np.asarray(table.ds(rho))
    safe = np.where(rho > 0, rho, 1.0)
    mean_dir = np.where(rho[..., None] > 0, omega_vector(masses) / safe[..., None], 0.0)
    collective = ((1.0 - rho - ds)[..., None] * mean_dir)[..., None, :]
    own = ds[..., None, None] * bin_directions(masses.shape[-1])
    return 2.0 * drift * (collective + own)
