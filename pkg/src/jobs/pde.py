"""
PDE Job: initial profile → hydrodynamic equation → trajectory + residual report

Solves the cross-diffusion equation on the configured grid, stores the
slices at the observation times, and checks mass conservation and the
weak-form residual against a few plane-wave test functions.

Run:
    python -m src.jobs.pde
    python -m src.jobs.pde --config runs/heat.yaml
"""

import logging
from datetime import datetime, timezone
from typing import Dict, Optional, Tuple

import numpy as np
import pandas as pd
from dotenv import load_dotenv

from src.config import RunConfig, substream, substream_key
from src.hydro import AngularDensityField, PdeTrajectory, TestFunction, load_table, solve_pde, weak_form_residual
from src.selfdiff import DsTable
from src.store import get_store

from .common import job_main

load_dotenv()

logger = logging.getLogger(__name__)

MASS_TOLERANCE = 1e-10

# (k1, k2, angular harmonic)
TEST_WAVES: Tuple[Tuple[int, int, int], ...] = ((1, 0, 0), (0, 1, 0), (1, 1, 0), (1, 0, 1))


def initial_field(config: RunConfig, side: Optional[int] = None) -> AngularDensityField:
    """
    Initial bin masses on the PDE grid; with `side`, block averages of the
    profile over the sites of the N-torus.
    """
    pde = config.pde_config()
    return AngularDensityField.from_profile(config.initial_profile(), pde.cells, pde.bins, side=side)


def solve(
    config: RunConfig,
    record_times=None,
    side: Optional[int] = None,
    table: Optional[DsTable] = None,
) -> PdeTrajectory:
    pde = config.pde_config()
    if table is None:
        table = load_table(pde)
    times = config.observation.times if record_times is None else record_times
    return solve_pde(
        initial_field(config, side),
        pde,
        table,
        record_times=times,
        rng=substream(config.model.seed, "gamma", side or 0),
    )


def residual_report(config: RunConfig, table: DsTable) -> Dict[str, float]:
    """Weak-form residual for each test wave on regularly spaced slices."""
    horizon = config.model.horizon
    if horizon <= 0:
        return {}
    times = np.linspace(0.0, horizon, config.pde.residual_slices)
    trajectory = solve(config, record_times=times, table=table)
    report = {}
    for k1, k2, angular in TEST_WAVES:
        H = TestFunction.plane_wave(k1=k1, k2=k2, angular=angular)
        value = weak_form_residual(trajectory, H, table, rng=substream(config.model.seed, "gamma", 1))
        report[f"k=({k1},{k2}),j={angular}"] = float(value)
        logger.info("[PDE] residual k=(%d,%d) j=%d: %.3e", k1, k2, angular, value)
    return report


def run_pde(config: RunConfig) -> Dict:
    """
    Solve, store and check.

    Returns:
        Report dict with mass drift, residuals and pass/fail assertions
    """
    store = get_store(config.output_dir)
    log_id = store.log_run_start("pde", config.profile.preset)
    started_at = datetime.now(timezone.utc)

    try:
        pde = config.pde_config()
        table = load_table(pde)
        logger.info("[PDE] L=%d M=%d dt=%.3e scheme=%s, table=%s", pde.cells, pde.bins, pde.dt, pde.scheme, table.source)

        trajectory = solve(config, table=table)
        store.write_trajectory("pde/trajectory", trajectory)
        mass_drift = float(np.max(np.abs(trajectory.total_mass - trajectory.total_mass[0])))
        logger.info("[PDE] %d steps, mass drift %.3e", trajectory.steps, mass_drift)

        residuals = residual_report(config, table)
        worst = max((abs(v) for v in residuals.values()), default=0.0)
        assertions = {
            "mass_conservation": mass_drift <= MASS_TOLERANCE * max(1.0, config.model.horizon),
            "weak_form_residual": worst <= config.pde.residual_tolerance,
        }
        report = {
            "pde": pde.to_dict(),
            "steps": trajectory.steps,
            "mass_drift": mass_drift,
            "dirichlet": trajectory.dirichlet.tolist(),
            "residuals": residuals,
            "assertions": assertions,
        }
        store.write_frame("pde/summary.csv", _summary_frame(trajectory))
        store.write_json("pde/report.json", report)
        streams = {"gamma": substream_key(config.model.seed, "gamma", 0)}
        store.write_manifest("pde", config.model_dump(), config.model.seed, streams, started_at)
        store.log_run_complete(log_id, steps=trajectory.steps, slices=len(trajectory.times))
        logger.info("[PDE] complete: %s", assertions)
        return report

    except Exception as e:
        logger.error("[PDE] Error: %s", e)
        store.log_run_error(log_id, str(e))
        raise


def _summary_frame(trajectory: PdeTrajectory) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "time": trajectory.times,
            "total_mass": trajectory.total_mass,
            "dirichlet": trajectory.dirichlet,
            "max_density": trajectory.density.max(axis=(1, 2)),
            "min_density": trajectory.density.min(axis=(1, 2)),
        }
    )


def _run(config: RunConfig, args) -> bool:
    return all(run_pde(config)["assertions"].values())


def main(argv=None) -> int:
    return job_main("Solve the hydrodynamic equation", _run, argv)


if __name__ == "__main__":
    raise SystemExit(main())
