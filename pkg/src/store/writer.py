"""
File-based store for run artifacts.

One RunStore per output directory; every artifact kind has its own group of
methods. Writers are exclusive per file (a lock per store guards the
append-only logs).
"""

import hashlib
import json
import logging
import threading
from datetime import datetime, timezone
from importlib import metadata
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Union

import numpy as np
import pandas as pd

from src.exactcheck import Verdict
from src.hydro import PdeTrajectory
from src.lattice import Configuration, read_snapshot, write_snapshot
from src.observables import FieldSnapshot
from src.selfdiff import DsTable

from .models import Manifest, RunLogEntry, SeriesRow

logger = logging.getLogger(__name__)

PACKAGE_NAME = "active-exclusion"
FALLBACK_VERSION = "0.1.0"

# Store instance per resolved output directory
_stores: Dict[Path, "RunStore"] = {}
_stores_lock = threading.Lock()


def get_store(output_dir: Union[str, Path]) -> "RunStore":
    """Get or create the store for a directory."""
    path = Path(output_dir).resolve()
    with _stores_lock:
        if path not in _stores:
            _stores[path] = RunStore(path)
        return _stores[path]


def code_version() -> str:
    try:
        return metadata.version(PACKAGE_NAME)
    except metadata.PackageNotFoundError:
        return FALLBACK_VERSION


def config_hash(payload: Dict[str, Any]) -> str:
    """SHA-256 of the canonical JSON form."""
    data = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode("utf-8")
    return hashlib.sha256(data).hexdigest()


def _jsonable(value):
    """numpy scalars and arrays in reports."""
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"not JSON serializable: {type(value).__name__}")


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


class RunStore:
    """Typed writers and readers for one output directory."""

    def __init__(self, root: Union[str, Path]):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self.artifacts: List[str] = []

    def path(self, name: str) -> Path:
        p = self.root / name
        p.parent.mkdir(parents=True, exist_ok=True)
        return p

    def _record(self, path: Path) -> Path:
        rel = str(path.relative_to(self.root))
        with self._lock:
            if rel not in self.artifacts:
                self.artifacts.append(rel)
        return path

    # =========================================================================
    # SNAPSHOTS
    # =========================================================================

    def write_configuration(self, name: str, config: Configuration, seed: Optional[int] = None, time: float = 0.0) -> Path:
        """Raw lattice configuration as NDJSON."""
        return self._record(write_snapshot(self.path(name), config, seed=seed, time=time))

    def read_configuration(self, name: str):
        return read_snapshot(self.root / name)

    def write_field(self, name: str, snapshot: FieldSnapshot) -> Path:
        """
        <name>.ndjson (header + one record per cell) and <name>.npy holding
        histogram and magnetization stacked on the last axis, plus a sidecar.
        """
        path = self.path(f"{name}.ndjson")
        with open(path, "w") as f:
            f.write(json.dumps(snapshot.metadata()) + "\n")
            for record in snapshot.records():
                f.write(json.dumps(record) + "\n")
        self._record(path)
        stacked = np.concatenate([snapshot.histogram, snapshot.magnetization], axis=-1)
        meta = snapshot.metadata()
        meta["cell_sites"] = snapshot.cell_sites.tolist()
        self.write_tensor(name, stacked, meta)
        return path

    def read_field(self, name: str) -> FieldSnapshot:
        stacked, meta = self.read_tensor(name)
        bins = int(meta["bins"])
        return FieldSnapshot(
            time=float(meta["time"]),
            eps=float(meta["eps"]),
            side=int(meta["N"]),
            histogram=stacked[..., :bins],
            magnetization=stacked[..., bins:],
            cell_sites=np.asarray(meta["cell_sites"]),
        )

    def write_tensor(self, name: str, array: np.ndarray, meta: Dict[str, Any]) -> Path:
        """<name>.npy plus <name>.json sidecar."""
        path = self.path(f"{name}.npy")
        np.save(path, np.asarray(array))
        sidecar = self.path(f"{name}.json")
        sidecar.write_text(json.dumps({"shape": list(np.shape(array)), **meta}, indent=2))
        self._record(path)
        self._record(sidecar)
        return path

    def read_tensor(self, name: str):
        array = np.load(self.root / f"{name}.npy")
        meta = json.loads((self.root / f"{name}.json").read_text())
        return array, meta

    # =========================================================================
    # SERIES
    # =========================================================================

    def write_series(self, name: str, rows: Iterable[Union[SeriesRow, Dict[str, Any]]]) -> Path:
        """CSV time series via pandas; SeriesRow or plain dict rows."""
        frame = pd.DataFrame([r.to_dict() if hasattr(r, "to_dict") else dict(r) for r in rows])
        return self.write_frame(name, frame)

    def write_frame(self, name: str, frame: pd.DataFrame) -> Path:
        path = self.path(name)
        frame.to_csv(path, index=False, float_format="%.17g")
        return self._record(path)

    def read_frame(self, name: str) -> pd.DataFrame:
        return pd.read_csv(self.root / name)

    def read_series(self, name: str) -> List[SeriesRow]:
        return [SeriesRow.from_dict(row) for row in self.read_frame(name).to_dict(orient="records")]

    # =========================================================================
    # TABLES
    # =========================================================================

    def write_ds_table(self, table: DsTable, name: str = "ds_table.csv") -> Path:
        path = table.save(self.path(name))
        self._record(path)
        self._record(Path(f"{path}.json"))
        return path

    def read_ds_table(self, name: str = "ds_table.csv") -> DsTable:
        return DsTable.load(self.root / name)

    def write_trajectory(self, name: str, trajectory: PdeTrajectory) -> Path:
        meta = trajectory.metadata()
        meta["total_mass"] = trajectory.total_mass.tolist()
        meta["dirichlet"] = trajectory.dirichlet.tolist()
        return self.write_tensor(name, trajectory.masses, meta)

    def write_json(self, name: str, payload: Dict[str, Any]) -> Path:
        path = self.path(name)
        path.write_text(json.dumps(payload, indent=2, default=_jsonable))
        return self._record(path)

    def read_json(self, name: str) -> Dict[str, Any]:
        return json.loads((self.root / name).read_text())

    # =========================================================================
    # VERDICTS
    # =========================================================================

    def write_verdicts(self, verdicts: Iterable[Verdict], name: str = "verdicts.jsonl") -> Path:
        path = self.path(name)
        with self._lock, open(path, "w") as f:
            for v in verdicts:
                f.write(json.dumps(v.to_dict()) + "\n")
        return self._record(path)

    def read_verdicts(self, name: str = "verdicts.jsonl") -> List[Verdict]:
        with open(self.root / name) as f:
            return [Verdict.from_dict(json.loads(line)) for line in f if line.strip()]

    # =========================================================================
    # MANIFEST
    # =========================================================================

    def write_manifest(
        self,
        command: str,
        config: Dict[str, Any],
        root_seed: int,
        substreams: Optional[Dict[str, List[int]]] = None,
        started_at: Optional[datetime] = None,
    ) -> Manifest:
        manifest = Manifest(
            command=command,
            config=config,
            config_hash=config_hash(config),
            version=code_version(),
            root_seed=int(root_seed),
            substreams=substreams or {},
            artifacts=sorted(self.artifacts),
            started_at=started_at,
            completed_at=datetime.now(timezone.utc),
        )
        (self.root / "manifest.json").write_text(json.dumps(manifest.to_dict(), indent=2))
        return manifest

    def read_manifest(self) -> Manifest:
        return Manifest.from_dict(json.loads((self.root / "manifest.json").read_text()))

    # =========================================================================
    # RUN LOG
    # =========================================================================

    @property
    def run_log_path(self) -> Path:
        return self.root / "run_log.jsonl"

    def read_run_log(self) -> List[RunLogEntry]:
        if not self.run_log_path.exists():
            return []
        with open(self.run_log_path) as f:
            return [RunLogEntry.from_dict(json.loads(line)) for line in f if line.strip()]

    def _append(self, entry: RunLogEntry):
        with open(self.run_log_path, "a") as f:
            f.write(json.dumps(entry.to_dict()) + "\n")

    def log_run_start(self, job_type: str, target: Optional[str] = None) -> int:
        """Log the start of a job. Returns the log ID."""
        with self._lock:
            log_id = 1 + max((e.id for e in self.read_run_log()), default=0)
            self._append(RunLogEntry(id=log_id, job_type=job_type, status="started", target=target, started_at=_now()))
        return log_id

    def _started(self, log_id: int) -> Optional[RunLogEntry]:
        for entry in self.read_run_log():
            if entry.id == log_id and entry.status == "started":
                return entry
        return None

    def log_run_complete(self, log_id: int, **counts):
        """Log successful completion of a job."""
        with self._lock:
            start = self._started(log_id)
            duration = None
            job_type = start.job_type if start else "unknown"
            if start and start.started_at:
                began = datetime.fromisoformat(start.started_at)
                duration = int((datetime.now(timezone.utc) - began).total_seconds() * 1000)
            self._append(
                RunLogEntry(
                    id=log_id,
                    job_type=job_type,
                    status="completed",
                    target=start.target if start else None,
                    completed_at=_now(),
                    duration_ms=duration,
                    counts={k: v for k, v in counts.items()},
                )
            )

    def log_run_error(self, log_id: int, error_message: str):
        """Log a failed job."""
        with self._lock:
            start = self._started(log_id)
            self._append(
                RunLogEntry(
                    id=log_id,
                    job_type=start.job_type if start else "unknown",
                    status="failed",
                    target=start.target if start else None,
                    completed_at=_now(),
                    error_message=error_message,
                )
            )
        logger.error("run %d failed: %s", log_id, error_message)
