"""
Tagged-particle displacement tracking.
"""

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from src.dynamics import SimulationState, advance
from src.errors import TagLostError


@dataclass
class DisplacementSeries:
    """Unwrapped displacement (X1, X2) of the tracer at each time."""

    times: np.ndarray
    displacement: np.ndarray

    @property
    def squared(self) -> np.ndarray:
        return self.displacement.astype(np.float64) ** 2


def msd_tracker(
    state: SimulationState, times: Sequence[float]
) -> Tuple[DisplacementSeries, SimulationState]:
    """Advance a tagged run through the (sorted, absolute) times and record X(t)."""
    if state.tracer is None:
        raise TagLostError("no tracer registered; call state.tag(site) before the run")
    times = np.asarray(times, dtype=np.float64)
    if np.any(np.diff(times) < 0) or (times.size and times[0] < state.time):
        raise ValueError("msd times must be sorted and not earlier than the state time")
    rows = []
    for t in times:
        state = advance(state, t - state.time)
        tracer = state.tracer
        if not state.config.occupancy[tracer.site]:
            raise TagLostError(f"tracer lost at t={state.time}")
        rows.append(tracer.displacement.copy())
    displacement = np.array(rows, dtype=np.int64).reshape(len(times), 2)
    return DisplacementSeries(times=times, displacement=displacement), state


def mean_squared_displacement(series: List[DisplacementSeries]):
    """Replica means of X1^2 and X2^2 with their standard errors, shape (T, 2) each."""
    stacked = np.stack([s.squared for s in series])
    mean = stacked.mean(axis=0)
    stderr = stacked.std(axis=0, ddof=1) / np.sqrt(len(series)) if len(series) > 1 else np.zeros_like(mean)
    return mean, stderr
