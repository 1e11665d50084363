"""
Exactcheck Job: the default suite of exact identities on tiny systems

Run:
    python -m src.jobs.exactcheck
    python -m src.jobs.exactcheck --pairs 1000
"""

import logging
from datetime import datetime, timezone
from typing import List

from dotenv import load_dotenv

from src.config import RunConfig, substream, substream_key
from src.exactcheck import Verdict, default_suite, summarize
from src.store import get_store

from .common import job_main

load_dotenv()

logger = logging.getLogger(__name__)


def run_exactcheck(config: RunConfig) -> List[Verdict]:
    store = get_store(config.output_dir)
    log_id = store.log_run_start("exactcheck")
    started_at = datetime.now(timezone.utc)

    try:
        verdicts = default_suite(
            seed=substream(config.model.seed, "exactcheck"),
            irreducibility_pairs=config.exactcheck.irreducibility_pairs,
            martingale_replicas=config.exactcheck.martingale_replicas,
            martingale_sides=config.exactcheck.martingale_sides,
        )
        store.write_verdicts(verdicts)
        failed = summarize(verdicts)
        for v in verdicts:
            logger.info("[EXACTCHECK] %-45s %s defect=%.3e", v.name, "ok" if v.passed else "FAIL", v.defect)
        store.write_manifest(
            "exactcheck",
            config.model_dump(),
            config.model.seed,
            {"exactcheck": substream_key(config.model.seed, "exactcheck")},
            started_at,
        )
        store.log_run_complete(log_id, checks=len(verdicts), failed=0 if failed is None else failed.count(",") + 1)
        if failed:
            logger.error("[EXACTCHECK] failed: %s", failed)
        else:
            logger.info("[EXACTCHECK] all %d checks passed", len(verdicts))
        return verdicts

    except Exception as e:
        logger.error("[EXACTCHECK] Error: %s", e)
        store.log_run_error(log_id, str(e))
        raise


def _run(config: RunConfig, args) -> bool:
    if args.pairs is not None:
        config = config.updated(exactcheck={"irreducibility_pairs": args.pairs})
    return all(v.passed for v in run_exactcheck(config))


def main(argv=None) -> int:
    return job_main(
        "Run the exact-check suite",
        _run,
        argv,
        extra=lambda p: p.add_argument("--pairs", type=int, help="Random irreducibility pairs per box"),
    )


if __name__ == "__main__":
    raise SystemExit(main())
