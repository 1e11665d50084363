"""
Records written next to the run artifacts.

Simple dataclasses with to_dict/from_dict, mapped to JSON files.
"""

from dataclasses import asdict, dataclass, field
from datetime import datetime
from typing import Any, Dict, List, Optional


def _known(cls, data: Dict[str, Any]) -> Dict[str, Any]:
    known_fields = {f.name for f in cls.__dataclass_fields__.values()}
    return {k: v for k, v in data.items() if k in known_fields}


@dataclass
class Manifest:
    """Everything needed to re-run an output directory."""

    command: str
    config: Dict[str, Any]
    config_hash: str
    version: str
    root_seed: int

    # "replica-3" -> [root, crc32("dynamics"), 3], ...
    substreams: Dict[str, List[int]] = field(default_factory=dict)
    artifacts: List[str] = field(default_factory=list)
    started_at: Optional[datetime] = None
    completed_at: Optional[datetime] = None

    def to_dict(self) -> Dict[str, Any]:
        d = {}
        for k, v in asdict(self).items():
            d[k] = v.isoformat() if isinstance(v, datetime) else v
        return d

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Manifest":
        data = dict(data)
        for field_name in ["started_at", "completed_at"]:
            if data.get(field_name) and isinstance(data[field_name], str):
                data[field_name] = datetime.fromisoformat(data[field_name])
        return cls(**_known(cls, data))


@dataclass
class RunLogEntry:
    """One line of run_log.jsonl."""

    id: int
    job_type: str
    status: str  # started, completed, failed
    target: Optional[str] = None
    started_at: Optional[str] = None
    completed_at: Optional[str] = None
    duration_ms: Optional[int] = None
    counts: Dict[str, Any] = field(default_factory=dict)
    error_message: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return {k: v for k, v in asdict(self).items() if v is not None}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunLogEntry":
        return cls(**_known(cls, data))


@dataclass
class SeriesRow:
    """One observation time of one replica."""

    replica: int
    time: float
    particles: int
    density: float
    magnetization_x: float
    magnetization_y: float
    events: int = 0
    accepted: int = 0
    truncated: bool = False

    # full-cluster fractions keyed "full_cluster_p<p>"
    clusters: Dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        d = asdict(self)
        d.update(d.pop("clusters"))
        return d

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SeriesRow":
        clusters = {k: float(v) for k, v in data.items() if str(k).startswith("full_cluster_p")}
        return cls(clusters=clusters, **_known(cls, {k: v for k, v in data.items() if k != "clusters"}))
