"""
Exact checks on tiny systems: full generators by enumeration, algebraic
identities, spectral gaps, irreducibility paths and ensemble equivalence.
"""

from .checks import (
    adjoint_check,
    current_identity_defect,
    dirichlet_form,
    dirichlet_form_gradients,
    glauber_two_state_check,
    row_sum_defect,
    sector_labels,
    sectors_match_multisets,
    self_adjoint_defect,
    stationarity_check,
    total_drift_current,
)
from .ensembles import (
    COS_PAIR,
    DENSITY,
    PAIR,
    PairFunction,
    decay_slope,
    ensemble_equivalence_check,
    fixed_fraction_sampler,
    lipschitz_ratio,
    pair_gap_formula,
    pair_gap_zscores,
    product_expectation,
)
from .generators import GeneratorSet, build_generators
from .irreducibility import bfs_distance, irreducibility_path, length_bound, replay_path, snake_path
from .spectral import GAP_BRACKET, grid_laplacian_gap, sector_generator, single_particle_gap, spectral_gap_blind
from .tiny import TinyModel
from .verdict import Verdict, default_suite, random_box_pair, summarize

__all__ = [
    # Enumeration
    "TinyModel",
    "GeneratorSet",
    "build_generators",
    # Identities
    "row_sum_defect",
    "self_adjoint_defect",
    "current_identity_defect",
    "total_drift_current",
    "adjoint_check",
    "stationarity_check",
    "dirichlet_form",
    "dirichlet_form_gradients",
    "sector_labels",
    "sectors_match_multisets",
    "glauber_two_state_check",
    # Spectral
    "GAP_BRACKET",
    "sector_generator",
    "spectral_gap_blind",
    "single_particle_gap",
    "grid_laplacian_gap",
    # Irreducibility
    "snake_path",
    "irreducibility_path",
    "replay_path",
    "length_bound",
    "bfs_distance",
    # Ensembles
    "PairFunction",
    "DENSITY",
    "PAIR",
    "COS_PAIR",
    "fixed_fraction_sampler",
    "ensemble_equivalence_check",
    "decay_slope",
    "pair_gap_formula",
    "pair_gap_zscores",
    "product_expectation",
    "lipschitz_ratio",
    # Verdicts
    "Verdict",
    "default_suite",
    "random_box_pair",
    "summarize",
]
