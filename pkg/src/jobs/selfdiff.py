"""
Selfdiff Job: tagged-particle runs → d_s estimates → monotone DsTable

Run:
    python -m src.jobs.selfdiff
    python -m src.jobs.selfdiff --replicas 1000 --side 128
"""

import logging
from datetime import datetime, timezone
from typing import Dict

import pandas as pd
from dotenv import load_dotenv

from src.config import RunConfig, substream, substream_key
from src.selfdiff import build_ds_table
from src.store import get_store

from .common import job_main

load_dotenv()

logger = logging.getLogger(__name__)

# d_s(0) = 1 within 2%, or within 4 standard errors when the budget is smaller
DS_ZERO_TOLERANCE = 0.02
RATIO_BOUND = 3.0


def run_selfdiff(config: RunConfig) -> Dict:
    """
    Estimate d_s on the configured grid and store the fitted table.

    Returns:
        Report dict with the table, per-density estimates and assertions
    """
    sd = config.selfdiff
    store = get_store(config.output_dir)
    log_id = store.log_run_start("selfdiff", f"N={sd.side}")
    started_at = datetime.now(timezone.utc)

    try:
        logger.info("[SELFDIFF] grid=%s N=%d T=%g replicas=%d", sd.grid, sd.side, sd.horizon, sd.replicas)
        table, results = build_ds_table(
            sd.grid,
            side=sd.side,
            horizon=sd.horizon,
            replicas=sd.replicas,
            seed=substream(config.model.seed, "selfdiff"),
            workers=config.model.workers,
        )
        path = store.write_ds_table(table, "ds_table.csv")
        store.write_frame("selfdiff/estimates.csv", pd.DataFrame([r.to_dict() for r in results]))

        ratio = table.ratio_constant()
        assertions = {
            "pinned_endpoints": bool(table.fitted[0] == 1.0 and table.fitted[-1] == 0.0),
            "ratio_bound": ratio <= RATIO_BOUND,
        }
        at_zero = next((r for r in results if r.rho == 0.0), None)
        if at_zero is not None:
            assertions["ds_at_zero"] = abs(at_zero.estimate - 1.0) <= max(DS_ZERO_TOLERANCE, 4.0 * at_zero.stderr)
        report = {
            "table": str(path),
            "ratio_constant": ratio,
            "fitted": dict(zip(map(str, table.grid.tolist()), table.fitted.tolist())),
            "assertions": assertions,
        }
        store.write_json("selfdiff/report.json", report)
        store.write_manifest(
            "selfdiff",
            config.model_dump(),
            config.model.seed,
            {"selfdiff": substream_key(config.model.seed, "selfdiff")},
            started_at,
        )
        store.log_run_complete(log_id, densities=len(results), replicas=sd.replicas)
        logger.info("[SELFDIFF] complete: C=%.3f %s", ratio, assertions)
        return report

    except Exception as e:
        logger.error("[SELFDIFF] Error: %s", e)
        store.log_run_error(log_id, str(e))
        raise


def _arguments(parser):
    parser.add_argument("--side", type=int, help="Lattice side (overrides selfdiff.side)")
    parser.add_argument("--replicas", type=int, help="Replicas per density (overrides selfdiff.replicas)")


def _run(config: RunConfig, args) -> bool:
    overrides = {k: v for k, v in {"side": args.side, "replicas": args.replicas}.items() if v is not None}
    if overrides:
        config = config.updated(selfdiff=overrides)
    return all(run_selfdiff(config)["assertions"].values())


def main(argv=None) -> int:
    return job_main("Estimate the self-diffusion coefficient table", _run, argv, extra=_arguments)


if __name__ == "__main__":
    raise SystemExit(main())
