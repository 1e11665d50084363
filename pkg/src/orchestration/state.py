"""
State definitions for the simulator-vs-PDE comparison pipeline.
"""

from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from typing import Any, Dict, List, Optional

import numpy as np


class Status(str, Enum):
    PENDING = "pending"
    SIMULATING = "simulating"
    SOLVING = "solving"
    COMPARING = "comparing"
    COMPLETE = "complete"
    ERROR = "error"


@dataclass
class SimulatedFields:
    """Replica-averaged mollified fields of one lattice size."""

    side: int
    times: np.ndarray
    # (T, L, L, M) bin masses averaged over replicas
    histograms: np.ndarray
    replicas: int
    # full-cluster fraction per p, averaged over times and replicas
    clusters: Dict[int, float] = field(default_factory=dict)
    max_density: float = 0.0


@dataclass
class CompareState:
    """
    Central state object that flows through the pipeline.
    Each node reads from and writes to this state.
    """

    # Input
    sides: List[int]

    # Pipeline status
    status: Status = Status.PENDING
    current_step: str = ""
    steps_completed: List[str] = field(default_factory=list)

    # Metadata
    started_at: Optional[datetime] = None
    completed_at: Optional[datetime] = None

    # Simulator
    simulated: Dict[int, SimulatedFields] = field(default_factory=dict)
    noise_floor: Dict[int, float] = field(default_factory=dict)

    # PDE
    pde_times: Optional[np.ndarray] = None
    pde_fields: Dict[int, np.ndarray] = field(default_factory=dict)

    # Comparison
    distances: Dict[int, float] = field(default_factory=dict)
    slope: Optional[float] = None
    assertions: Dict[str, bool] = field(default_factory=dict)

    # Error tracking
    error: Optional[str] = None
    error_step: Optional[str] = None
    failed_status: Optional[Status] = None
    retry_count: int = 0

    def mark_step_complete(self, step: str):
        self.steps_completed.append(step)
        self.current_step = ""

    def mark_error(self, step: str, error: str):
        """Record an error; `failed_status` is where a retry resumes."""
        if self.status != Status.ERROR:
            self.failed_status = self.status
        self.status = Status.ERROR
        self.error = error
        self.error_step = step

    @property
    def passed(self) -> bool:
        return self.status == Status.COMPLETE and all(self.assertions.values())

    def to_dict(self) -> Dict[str, Any]:
        return {
            "sides": self.sides,
            "status": self.status.value,
            "steps_completed": self.steps_completed,
            "distances": {str(k): v for k, v in self.distances.items()},
            "slope": self.slope,
            "noise_floor": {str(k): v for k, v in self.noise_floor.items()},
            "clusters": {str(k): {str(p): v for p, v in s.clusters.items()} for k, s in self.simulated.items()},
            "assertions": self.assertions,
            "error": self.error,
            "error_step": self.error_step,
            "retry_count": self.retry_count,
            "started_at": self.started_at.isoformat() if self.started_at else None,
            "completed_at": self.completed_at.isoformat() if self.completed_at else None,
        }
