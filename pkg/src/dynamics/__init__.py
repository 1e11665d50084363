"""
Dynamics: rates, the compiled thinning simulator, exact generator action and
instantaneous currents.
"""

from .currents import alignment_rate, current_asym, current_sym
from .generator import apply_generator, asymmetric_part, glauber_part, symmetric_part
from .params import DEFAULT_EVENT_BUDGET, ModelParams
from .rates import (
    drift_components,
    glauber_density,
    glauber_law,
    jump_rate,
    resultant,
    sample_glauber_angle,
    two_type_weights,
    von_mises_parameters,
)
from .simulation import EventCounters, SimulationState, Tracer, advance, step_events

__all__ = [
    # Parameters and state
    "DEFAULT_EVENT_BUDGET",
    "ModelParams",
    "SimulationState",
    "EventCounters",
    "Tracer",
    # Rates
    "jump_rate",
    "drift_components",
    "resultant",
    "von_mises_parameters",
    "glauber_density",
    "glauber_law",
    "two_type_weights",
    "sample_glauber_angle",
    # Simulation
    "advance",
    "step_events",
    # Generator and currents
    "apply_generator",
    "symmetric_part",
    "asymmetric_part",
    "glauber_part",
    "current_sym",
    "current_asym",
    "alignment_rate",
]
