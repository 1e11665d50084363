"""
Run artifacts on disk: NDJSON snapshots, CSV series, tensors with JSON
sidecars, verdicts, manifests and the run log.
"""

from .models import Manifest, RunLogEntry, SeriesRow
from .writer import RunStore, code_version, config_hash, get_store

__all__ = [
    # Store
    "get_store",
    "RunStore",
    "code_version",
    "config_hash",
    # Models
    "Manifest",
    "RunLogEntry",
    "SeriesRow",
]
