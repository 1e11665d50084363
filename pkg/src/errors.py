"""
Exception hierarchy for active-exclusion.

Everything raised on purpose by the package derives from AepError, so the
jobs can map it to a non-zero exit code without swallowing real bugs.
"""

from typing import List, Optional


class AepError(Exception):
    """Base class for all package errors."""


class ConfigError(AepError, ValueError):
    """Invalid run configuration. `issues` lists (dotted key, message) pairs."""

    def __init__(self, message: str, issues: Optional[List[tuple[str, str]]] = None):
        self.issues = issues or []
        if self.issues:
            detail = "; ".join(f"{key}: {msg}" for key, msg in self.issues)
            message = f"{message} ({detail})"
        super().__init__(message)

    @property
    def keys(self) -> List[str]:
        return [key for key, _ in self.issues]


class ProfileError(AepError, ValueError):
    """Initial profile reaches total density 1 somewhere."""


class LatticeError(AepError, ValueError):
    """Bad site, bad box, or an operation that needs a particle on an empty site."""


class TagLostError(AepError):
    """The tagged particle is no longer where the tracker expects it."""


class StabilityError(AepError, ValueError):
    """Time step violates the explicit scheme's stability bound."""


class GridMismatchError(AepError, ValueError):
    """Fields or trajectories that must share a grid do not."""


class SizeBudgetError(AepError, ValueError):
    """Exact enumeration requested beyond the allowed state count."""


class IrreducibilityError(AepError, ValueError):
    """Path construction impossible (fewer than two holes, different contents)."""


class TableNotBuiltError(AepError):
    """DsTable queried before it holds an interpolant."""


class PipelineError(AepError):
    """Comparison pipeline ended in ERROR after its retries."""
