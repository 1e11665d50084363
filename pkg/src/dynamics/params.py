"""
Model parameters of the active exclusion process.
"""

from dataclasses import asdict, dataclass
from typing import Any, Dict

from src.errors import ConfigError

# effectively unlimited
DEFAULT_EVENT_BUDGET = 2**62


@dataclass(frozen=True)
class ModelParams:
    """
    side: lattice side N
    drift: lambda, with 0 <= lambda <= N so that 1 +- lambda_i(theta)/N >= 0
    beta: alignment strength of the Glauber update
    horizon: macroscopic end time T
    two_type: restrict angles to {0, pi} (flip law renormalized on the two atoms)
    """

    side: int
    drift: float = 0.0
    beta: float = 0.0
    horizon: float = 1.0
    seed: int = 0
    max_events: int = DEFAULT_EVENT_BUDGET
    two_type: bool = False

    def __post_init__(self):
        issues = []
        if self.side < 2:
            issues.append(("side", f"must be >= 2, got {self.side}"))
        if self.drift < 0:
            issues.append(("drift", f"must be >= 0, got {self.drift}"))
        if self.drift > self.side:
            issues.append(("drift", f"lambda={self.drift} exceeds N={self.side}"))
        if self.beta < 0:
            issues.append(("beta", f"must be >= 0, got {self.beta}"))
        if self.horizon < 0:
            issues.append(("horizon", f"must be >= 0, got {self.horizon}"))
        if self.max_events < 0:
            issues.append(("max_events", "must be >= 0"))
        if issues:
            raise ConfigError("invalid model parameters", issues)

    @property
    def exchange_rate(self) -> float:
        """Dominating exchange rate per particle, 4 N^2 (1 + lambda/N)."""
        n = self.side
        return 4.0 * n * n * (1.0 + self.drift / n)

    @property
    def rate_per_particle(self) -> float:
        """Exchange rate plus the unit Glauber rate."""
        return self.exchange_rate + 1.0

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)
