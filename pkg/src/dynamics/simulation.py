"""
Simulation state and the advance operation.

Time is macroscopic: the N^2 acceleration lives in the rates, so snapshot
times compare directly with PDE times.
"""

import logging
from dataclasses import asdict, dataclass, field
from typing import Dict, Optional

import numpy as np

from src.errors import LatticeError, TagLostError
from src.lattice import Configuration

from .kernel import N_COUNTERS, STATUS_BUDGET, run_events
from .params import ModelParams

logger = logging.getLogger(__name__)


@dataclass
class EventCounters:
    exchange_attempts: int = 0
    accepted: int = 0
    rejected_exclusion: int = 0
    rejected_drift: int = 0
    angle_updates: int = 0

    @classmethod
    def from_array(cls, values: np.ndarray) -> "EventCounters":
        return cls(*(int(v) for v in values))

    def to_array(self) -> np.ndarray:
        return np.array(
            [
                self.exchange_attempts,
                self.accepted,
                self.rejected_exclusion,
                self.rejected_drift,
                self.angle_updates,
            ],
            dtype=np.int64,
        )

    @property
    def events(self) -> int:
        return self.exchange_attempts + self.angle_updates

    def to_dict(self) -> Dict[str, int]:
        return asdict(self)


@dataclass
class Tracer:
    """Tagged particle: current site and unwrapped displacement (dx1, dx2)."""

    site: int
    displacement: np.ndarray = field(default_factory=lambda: np.zeros(2, dtype=np.int64))

    def squared(self) -> np.ndarray:
        return self.displacement.astype(np.float64) ** 2


@dataclass
class SimulationState:
    config: Configuration
    params: ModelParams
    rng: np.random.Generator
    time: float = 0.0
    counters: EventCounters = field(default_factory=EventCounters)
    tracer: Optional[Tracer] = None
    truncated: bool = False

    @classmethod
    def start(
        cls,
        config: Configuration,
        params: ModelParams,
        rng: Optional[np.random.Generator] = None,
    ) -> "SimulationState":
        if config.side != params.side:
            raise LatticeError(f"configuration side {config.side} != model side {params.side}")
        if params.two_type and np.any(
            (config.angle[config.particles] != 0.0) & (config.angle[config.particles] != np.pi)
        ):
            raise LatticeError("two-type runs need all angles in {0, pi}")
        if rng is None:
            rng = np.random.default_rng(params.seed)
        return cls(config=config.copy(), params=params, rng=rng)

    def tag(self, site: int) -> "SimulationState":
        """Register the particle at `site` as the tracer."""
        if not self.config.is_occupied(site):
            raise TagLostError(f"cannot tag empty site {site}")
        self.tracer = Tracer(site=site)
        return self


def _run(state: SimulationState, t_end: float, budget: int) -> tuple[SimulationState, int]:
    config = state.config.copy()
    counters = state.counters.to_array()
    if state.tracer is not None:
        if not config.occupancy[state.tracer.site]:
            raise TagLostError(f"tracer site {state.tracer.site} is empty")
        tag = np.array([state.tracer.site, *state.tracer.displacement], dtype=np.int64)
    else:
        tag = np.array([-1, 0, 0], dtype=np.int64)
    assert counters.size == N_COUNTERS

    time, status = run_events(
        config.occupancy,
        config.angle,
        config.particles,
        config.slot,
        config.geometry.neighbor_table,
        config.side,
        float(state.params.drift),
        float(state.params.beta),
        bool(state.params.two_type),
        float(state.time),
        float(t_end),
        int(budget),
        counters,
        tag,
        state.rng,
    )

    tracer = None
    if state.tracer is not None:
        tracer = Tracer(site=int(tag[0]), displacement=tag[1:].copy())
    new_state = SimulationState(
        config=config,
        params=state.params,
        rng=state.rng,
        time=float(time),
        counters=EventCounters.from_array(counters),
        tracer=tracer,
        truncated=state.truncated,
    )
    return new_state, int(status)


def advance(state: SimulationState, dt: float) -> SimulationState:
    """
    Run the chain for macroscopic time dt. The returned state owns the RNG
    stream from now on. If the event budget runs out the state stops early
    with `truncated=True`.
    """
    if dt < 0:
        raise ValueError(f"dt must be >= 0, got {dt}")
    budget = max(0, state.params.max_events - state.counters.events)
    new_state, status = _run(state, state.time + dt, budget)
    if status == STATUS_BUDGET:
        new_state.truncated = True
        logger.warning(
            "event budget of %d exhausted at t=%.6f (target %.6f)",
            state.params.max_events,
            new_state.time,
            state.time + dt,
        )
    return new_state


def step_events(state: SimulationState, n_events: int) -> SimulationState:
    """Process exactly n_events proposals of the thinned chain (null events included)."""
    if state.config.particle_count == 0:
        return state
    new_state, _ = _run(state, np.inf, n_events)
    return new_state
