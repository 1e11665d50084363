"""
Self-diffusion coefficient: tagged-particle estimates and the d_s table.
"""

from .estimate import DsEstimate, estimate_ds, jackknife, palm_configuration
from .table import DEFAULT_GRID, NORMALIZATION, DsTable, build_ds_table

__all__ = [
    # Estimation
    "DsEstimate",
    "estimate_ds",
    "jackknife",
    "palm_configuration",
    # Table
    "DsTable",
    "build_ds_table",
    "DEFAULT_GRID",
    "NORMALIZATION",
]
