"""
Compare Job: simulator fields vs PDE solution over several lattice sizes

Runs the simulate → solve → compare graph: replica-averaged mollified
fields for every N, the PDE started from the matching expected initial
field, the time-averaged L1 distance D(N) and its log-log slope.

Run:
    python -m src.jobs.compare
    python -m src.jobs.compare --config runs/two_type.yaml --sides 32 64 96
"""

import logging
from datetime import datetime, timezone
from typing import Dict, Sequence

import numpy as np
from dotenv import load_dotenv

from src.config import RunConfig, substream_key
from src.errors import GridMismatchError, PipelineError
from src.hydro import AngularDensityField, load_table
from src.observables import binomial_full_cluster_probability
from src.orchestration import CompareState, GraphRunner, SimulatedFields, Status, build_compare_graph
from src.store import get_store

from . import pde as pde_job
from .common import job_main
from .simulate import run_simulate

load_dotenv()

logger = logging.getLogger(__name__)

# cluster fraction at p=2 may exceed the i.i.d. value by at most this factor
CLUSTER_BOUND_FACTOR = 3.0


# ============================================================================
# DISTANCES
# ============================================================================


def coarsen(masses: np.ndarray, cells: int) -> np.ndarray:
    """Block means of (..., P, P, M) bin masses down to (..., cells, cells, M)."""
    fine = masses.shape[-2]
    if fine % cells:
        raise GridMismatchError(f"cannot coarsen {fine} cells to {cells}")
    k = fine // cells
    shape = masses.shape[:-3] + (cells, k, cells, k, masses.shape[-1])
    return masses.reshape(shape).mean(axis=(-4, -2))


def l1_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Sum of |a - b| over bins, averaged over cells."""
    if a.shape != b.shape:
        raise GridMismatchError(f"fields differ in shape: {a.shape} vs {b.shape}")
    cells = a.shape[0]
    return float(np.abs(a - b).sum()) / cells**2


def time_averaged_distance(simulated: np.ndarray, solved: np.ndarray) -> float:
    """Mean of l1_distance over the (T, L, L, M) schedule."""
    if simulated.shape != solved.shape:
        raise GridMismatchError(f"schedules differ in shape: {simulated.shape} vs {solved.shape}")
    return float(np.mean([l1_distance(s, p) for s, p in zip(simulated, solved)]))


def log_log_slope(sides: Sequence[int], distances: Sequence[float]) -> float:
    x = np.log(np.asarray(sides, dtype=np.float64))
    y = np.log(np.asarray(distances, dtype=np.float64))
    return float(np.polyfit(x, y, 1)[0])


# ============================================================================
# GRAPH NODES
# ============================================================================


def check_grid(config: RunConfig, side: int):
    obs_cells = config.observation.cells
    pde_cells = config.pde.cells
    if obs_cells is None:
        raise GridMismatchError("compare needs observation.cells set to a common grid")
    if pde_cells % obs_cells:
        raise GridMismatchError(f"pde.cells={pde_cells} is not a multiple of observation.cells={obs_cells}")
    if side % pde_cells:
        raise GridMismatchError(f"N={side} is not a multiple of pde.cells={pde_cells}")


def make_nodes(config: RunConfig):
    """simulate, solve and compare nodes bound to one config."""
    obs = config.observation
    profile = config.initial_profile()

    def simulate_node(state: CompareState) -> CompareState:
        for side in state.sides:
            if side in state.simulated:
                continue
            result = run_simulate(config, side=side)
            expected = AngularDensityField.from_profile(profile, side, obs.bins, side=side)
            state.simulated[side] = SimulatedFields(
                side=side,
                times=result.times,
                histograms=result.mean_histograms,
                replicas=len(result.replicas),
                clusters=result.cluster_means(),
                max_density=float(expected.density.max()),
            )
            if config.compare.noise_floor:
                initial = AngularDensityField.from_profile(profile, obs.cells, obs.bins, side=side)
                state.noise_floor[side] = l1_distance(state.simulated[side].histograms[0], initial.masses)
                logger.info("[COMPARE] noise floor N=%d: %.4e", side, state.noise_floor[side])
        return state

    def solve_node(state: CompareState) -> CompareState:
        table = load_table(config.pde_config())
        for side in state.sides:
            if side in state.pde_fields:
                continue
            trajectory = pde_job.solve(config, side=side, table=table)
            state.pde_times = trajectory.times
            state.pde_fields[side] = coarsen(trajectory.masses, obs.cells)
            logger.info("[COMPARE] PDE for N=%d: %d steps", side, trajectory.steps)
        return state

    def compare_node(state: CompareState) -> CompareState:
        for side in state.sides:
            d = time_averaged_distance(state.simulated[side].histograms, state.pde_fields[side])
            state.distances[side] = d
            logger.info("[COMPARE] D(%d)=%.4e", side, d)
        state.assertions = compare_assertions(config, state)
        return state

    return simulate_node, solve_node, compare_node


def compare_assertions(config: RunConfig, state: CompareState) -> Dict[str, bool]:
    sides = sorted(state.sides)
    d = [state.distances[n] for n in sides]
    assertions: Dict[str, bool] = {}
    if len(sides) >= 2:
        state.slope = log_log_slope(sides, d)
        assertions["strictly_decreasing"] = all(a > b for a, b in zip(d, d[1:]))
        assertions["ratio"] = d[-1] < config.compare.max_ratio * d[0]

    # the pure-sampling calibration only holds without drift and alignment
    model = config.model
    if config.compare.noise_floor and model.drift == 0 and model.beta == 0:
        factor = config.compare.noise_floor_factor
        assertions["noise_floor"] = all(state.distances[n] <= factor * state.noise_floor[n] for n in sides)

    for n in sides:
        clusters = state.simulated[n].clusters
        ps = sorted(clusters)
        assertions[f"clusters_nonincreasing_N{n}"] = all(clusters[a] >= clusters[b] for a, b in zip(ps, ps[1:]))
        if 2 in clusters:
            bound = CLUSTER_BOUND_FACTOR * binomial_full_cluster_probability(state.simulated[n].max_density, 2)
            assertions[f"clusters_p2_bound_N{n}"] = clusters[2] <= bound
    return assertions


# ============================================================================
# JOB
# ============================================================================


def run_compare(config: RunConfig, sides: Sequence[int] = None) -> CompareState:
    """
    Run the comparison graph and store the report.

    Returns:
        Final CompareState (status, distances, slope, assertions)

    Raises:
        GridMismatchError: the observation, PDE and lattice grids do not nest
        PipelineError: a node still failed after its retries
    """
    sides = list(sides or config.compare.sides)
    for side in sides:
        check_grid(config, side)

    store = get_store(config.output_dir)
    log_id = store.log_run_start("compare", ",".join(map(str, sides)))
    started_at = datetime.now(timezone.utc)

    try:
        graph = build_compare_graph(*make_nodes(config))
        state = GraphRunner(graph).run(CompareState(sides=sides))
        store.write_json("compare/report.json", state.to_dict())
        if state.status != Status.COMPLETE:
            raise PipelineError(f"stopped at {state.error_step}: {state.error}")

        root = config.model.seed
        streams = {}
        for side in sides:
            streams[f"N{side}/gamma"] = substream_key(root, "gamma", side)
            for r in range(config.model.replicas):
                streams[f"N{side}/site-sampler/{r}"] = substream_key(root, "site-sampler", side, r)
                streams[f"N{side}/dynamics/{r}"] = substream_key(root, "dynamics", side, r)
        store.write_manifest("compare", config.model_dump(), root, streams, started_at)
        store.log_run_complete(log_id, sides=len(sides), slope=state.slope)
        logger.info("[COMPARE] slope=%s %s", state.slope, state.assertions)
        return state

    except Exception as e:
        logger.error("[COMPARE] Error: %s", e)
        store.log_run_error(log_id, str(e))
        raise


def _run(config: RunConfig, args) -> bool:
    if args.sides:
        config = config.updated(compare={"sides": args.sides})
    return run_compare(config).passed


def main(argv=None) -> int:
    return job_main(
        "Compare simulated fields with the hydrodynamic equation",
        _run,
        argv,
        extra=lambda p: p.add_argument("--sides", type=int, nargs="+", help="Lattice sides (overrides compare.sides)"),
    )


if __name__ == "__main__":
    raise SystemExit(main())
