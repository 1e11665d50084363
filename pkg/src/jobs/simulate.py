"""
Simulate Job: initial profile → lattice dynamics → field snapshots

Samples the product measure of the configured profile, runs the active
exclusion process up to every observation time and writes the mollified
empirical fields, raw configurations and the per-replica time series.

Run:
    python -m src.jobs.simulate
    python -m src.jobs.simulate --config runs/two_type.yaml --side 64
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Dict, List, Optional

import numpy as np
from dotenv import load_dotenv

from src.config import RunConfig, substream, substream_key
from src.dynamics import SimulationState, advance
from src.lattice import Configuration, TorusGeometry, direction, sample_product_measure
from src.observables import FieldSnapshot, full_cluster_fraction, mollified_density
from src.store import RunStore, SeriesRow, get_store

from .common import job_main

load_dotenv()

logger = logging.getLogger(__name__)


@dataclass
class ReplicaRun:
    replica: int
    snapshots: List[FieldSnapshot]
    configurations: List[Configuration]
    rows: List[SeriesRow]
    truncated: bool = False


@dataclass
class SimulationResult:
    side: int
    times: np.ndarray
    replicas: List[ReplicaRun] = field(default_factory=list)

    @property
    def mean_histograms(self) -> np.ndarray:
        """(T, L, L, M) replica average of the snapshot histograms."""
        return np.mean([[s.histogram for s in r.snapshots] for r in self.replicas], axis=0)

    def cluster_means(self) -> Dict[int, float]:
        """Full-cluster fraction per p, averaged over times and replicas."""
        keys = self.replicas[0].rows[0].clusters.keys() if self.replicas else []
        return {
            int(k.removeprefix("full_cluster_p")): float(np.mean([row.clusters[k] for r in self.replicas for row in r.rows]))
            for k in keys
        }


def series_row(replica: int, state: SimulationState, cluster_sizes) -> SeriesRow:
    config = state.config
    n_sites = config.geometry.n_sites
    c, s = direction(config.angle[config.particles])
    return SeriesRow(
        replica=replica,
        time=float(state.time),
        particles=config.particle_count,
        density=config.particle_count / n_sites,
        magnetization_x=float(np.sum(c)) / n_sites,
        magnetization_y=float(np.sum(s)) / n_sites,
        events=state.counters.events,
        accepted=state.counters.accepted,
        truncated=state.truncated,
        clusters={f"full_cluster_p{p}": full_cluster_fraction(config, p) for p in cluster_sizes},
    )


def run_replica(config: RunConfig, side: int, replica: int) -> ReplicaRun:
    """One replica: its own site-sampler and dynamics substreams."""
    root = config.model.seed
    obs = config.observation
    geometry = TorusGeometry(side)
    initial = sample_product_measure(config.initial_profile(), geometry, substream(root, "site-sampler", side, replica))
    state = SimulationState.start(
        initial, config.model_params(side=side), rng=substream(root, "dynamics", side, replica)
    )
    cells = config.cells_for(side)

    run = ReplicaRun(replica=replica, snapshots=[], configurations=[], rows=[])
    started = time.monotonic()
    for t in obs.times:
        if t > state.time:
            state = advance(state, t - state.time)
        run.snapshots.append(mollified_density(state.config, obs.eps, obs.bins, time=t, cells=cells))
        run.configurations.append(state.config.copy())
        run.rows.append(series_row(replica, state, obs.cluster_sizes))
    run.truncated = state.truncated
    logger.info(
        "[SIMULATE] N=%d replica %d done in %.1fs (%d events)",
        side, replica, time.monotonic() - started, state.counters.events,
    )
    return run


def simulate(config: RunConfig, side: Optional[int] = None) -> SimulationResult:
    """All replicas of one lattice size on a bounded worker pool."""
    side = side or config.model.side
    replicas = range(config.model.replicas)
    with ThreadPoolExecutor(max_workers=config.model.workers) as pool:
        runs = list(pool.map(lambda r: run_replica(config, side, r), replicas))
    return SimulationResult(side=side, times=np.asarray(config.observation.times, dtype=np.float64), replicas=runs)


def write_result(store: RunStore, result: SimulationResult, config: RunConfig) -> Dict[str, List[int]]:
    """Write every artifact of one lattice size; returns the substream keys used."""
    root = config.model.seed
    prefix = f"N{result.side}"
    streams = {}
    rows = []
    for run in result.replicas:
        for k, (snap, conf) in enumerate(zip(run.snapshots, run.configurations)):
            store.write_field(f"{prefix}/fields/r{run.replica:03d}_t{k:03d}", snap)
            if config.observation.snapshots:
                store.write_configuration(f"{prefix}/snapshots/r{run.replica:03d}_t{k:03d}.ndjson", conf, seed=root, time=snap.time)
        rows.extend(run.rows)
        streams[f"{prefix}/site-sampler/{run.replica}"] = substream_key(root, "site-sampler", result.side, run.replica)
        streams[f"{prefix}/dynamics/{run.replica}"] = substream_key(root, "dynamics", result.side, run.replica)
    store.write_series(f"{prefix}/series.csv", rows)
    mean = result.mean_histograms
    for k, t in enumerate(result.times):
        store.write_tensor(f"{prefix}/fields/mean_t{k:03d}", mean[k], {"time": float(t), "replicas": len(result.replicas)})
    return streams


def run_simulate(config: RunConfig, side: Optional[int] = None) -> SimulationResult:
    """
    Simulate and store one lattice size.

    Returns:
        The in-memory result (snapshots, configurations, series)
    """
    side = side or config.model.side
    store = get_store(config.output_dir)
    log_id = store.log_run_start("simulate", f"N={side}")
    started_at = datetime.now(timezone.utc)

    try:
        logger.info("[SIMULATE] N=%d, %d replicas, times=%s", side, config.model.replicas, config.observation.times)
        result = simulate(config, side)
        streams = write_result(store, result, config)
        truncated = sum(run.truncated for run in result.replicas)
        store.write_manifest("simulate", config.model_dump(), config.model.seed, streams, started_at)
        store.log_run_complete(log_id, replicas=len(result.replicas), snapshots=len(result.times), truncated=truncated)
        logger.info("[SIMULATE] complete, output in %s", store.root)
        return result

    except Exception as e:
        logger.error("[SIMULATE] Error: %s", e)
        store.log_run_error(log_id, str(e))
        raise


def _run(config: RunConfig, args) -> bool:
    result = run_simulate(config, side=args.side)
    # a run cut short by the event budget is a failed in-run assertion
    return not any(run.truncated for run in result.replicas)


def main(argv=None) -> int:
    return job_main(
        "Simulate the active exclusion process",
        _run,
        argv,
        extra=lambda p: p.add_argument("--side", type=int, help="Lattice side (overrides model.side)"),
    )


if __name__ == "__main__":
    raise SystemExit(main())
