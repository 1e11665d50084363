"""
Hydrodynamic equation: coefficients, creation term, finite-difference solver
weak-form residual and the empirical-measure martingale.
"""

from .coefficients import angle_profile, coeff_d, coeff_s, drift_velocity, omega_vector
from .creation import (
    creation_monte_carlo,
    creation_rate,
    creation_two_type_exact,
    creation_uniform,
    flip_law,
    von_mises_bin_masses,
)
from .field import AngularDensityField, PdeConfig, bin_directions, dirichlet_energy
from .solver import (
    PdeTrajectory,
    load_table,
    pde_rhs,
    solve_pde,
    stable_dt,
    step_pde,
    step_two_type,
    two_type_rhs,
)
from .martingale import (
    MartingaleSample,
    empirical_pairing,
    exchange_compensator,
    martingale_increment,
    martingale_variance_slope,
    sample_martingale,
)
from .weakform import TestFunction, pairing, weak_form_residual

__all__ = [
    # Fields
    "AngularDensityField",
    "PdeConfig",
    "bin_directions",
    "dirichlet_energy",
    # Coefficients
    "angle_profile",
    "coeff_d",
    "coeff_s",
    "omega_vector",
    "drift_velocity",
    # Creation term
    "creation_rate",
    "creation_uniform",
    "creation_two_type_exact",
    "creation_monte_carlo",
    "von_mises_bin_masses",
    "flip_law",
    # Solver
    "PdeTrajectory",
    "stable_dt",
    "load_table",
    "pde_rhs",
    "step_pde",
    "solve_pde",
    "two_type_rhs",
    "step_two_type",
    # Weak form
    "TestFunction",
    "pairing",
    "weak_form_residual",
    # Martingale of the empirical measure
    "MartingaleSample",
    "empirical_pairing",
    "exchange_compensator",
    "martingale_increment",
    "sample_martingale",
    "martingale_variance_slope",
]
