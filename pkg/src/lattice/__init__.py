"""
Lattice core: torus geometry, configurations, measures, samplers and the
distance on grand-canonical parameters.
"""

from .angles import TWO_PI, angle_bin, bin_centers, bin_edges, direction, wrap_angle
from .configuration import Configuration, set_angle, swap, translate
from .geometry import DIRECTIONS, TorusGeometry
from .measures import AngleMeasure, CanonicalState, InitialProfile
from .metric import circular_distance, param_distance
from .sampling import (
    as_generator,
    canonical_state_of,
    condition_to_canonical,
    empirical_angular_density,
    sample_grand_canonical,
    sample_product_measure,
)
from .snapshot import read_snapshot, write_snapshot

__all__ = [
    # Angles
    "TWO_PI",
    "angle_bin",
    "bin_centers",
    "bin_edges",
    "direction",
    "wrap_angle",
    # Geometry and configurations
    "DIRECTIONS",
    "TorusGeometry",
    "Configuration",
    "set_angle",
    "swap",
    "translate",
    # Measures
    "AngleMeasure",
    "CanonicalState",
    "InitialProfile",
    "param_distance",
    "circular_distance",
    # Sampling
    "as_generator",
    "sample_product_measure",
    "sample_grand_canonical",
    "canonical_state_of",
    "condition_to_canonical",
    "empirical_angular_density",
    # Snapshots
    "read_snapshot",
    "write_snapshot",
]
