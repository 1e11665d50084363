"""
Observables: mollified fields, magnetization, full clusters and tracer MSD.
"""

from .clusters import binomial_full_cluster_probability, box_counts, full_cluster_fraction
from .fields import (
    FieldSnapshot,
    block_average,
    box_half_width,
    cell_labels,
    default_cells,
    magnetization_field,
    mollified_density,
)
from .tracer import DisplacementSeries, mean_squared_displacement, msd_tracker

__all__ = [
    # Fields
    "FieldSnapshot",
    "mollified_density",
    "magnetization_field",
    "block_average",
    "box_half_width",
    "default_cells",
    "cell_labels",
    # Clusters
    "full_cluster_fraction",
    "box_counts",
    "binomial_full_cluster_probability",
    # Tracer
    "DisplacementSeries",
    "msd_tracker",
    "mean_squared_displacement",
]
