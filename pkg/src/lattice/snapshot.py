"""
NDJSON snapshots of configurations.

Line 1 is a header {"N": ..., "seed": ..., "time": ...}; every further line
is one occupied site {"x": int, "y": int, "theta": float}. Floats are written
with repr precision, so reading back is bit-exact.
"""

import json
from pathlib import Path
from typing import Optional, Tuple, Union

import numpy as np

from src.errors import LatticeError

from .configuration import Configuration
from .geometry import TorusGeometry


def snapshot_lines(config: Configuration, seed: Optional[int] = None, time: float = 0.0):
    yield json.dumps({"N": config.side, "seed": seed, "time": float(time)})
    for site in np.sort(config.particles):
        x, y = config.geometry.coords(int(site))
        yield json.dumps({"x": x, "y": y, "theta": float(config.angle[site])})


def write_snapshot(
    path: Union[str, Path],
    config: Configuration,
    seed: Optional[int] = None,
    time: float = 0.0,
) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        for line in snapshot_lines(config, seed, time):
            f.write(line + "\n")
    return path


def read_snapshot(path: Union[str, Path]) -> Tuple[Configuration, dict]:
    """Return the configuration and the header record."""
    with open(path) as f:
        lines = [line for line in f if line.strip()]
    if not lines:
        raise LatticeError(f"empty snapshot file: {path}")
    header = json.loads(lines[0])
    geometry = TorusGeometry(int(header["N"]))
    occupancy = np.zeros(geometry.n_sites, dtype=np.uint8)
    angle = np.zeros(geometry.n_sites)
    for line in lines[1:]:
        record = json.loads(line)
        site = geometry.site(record["x"], record["y"])
        occupancy[site] = 1
        angle[site] = record["theta"]
    return Configuration.from_arrays(geometry, occupancy, angle), header
