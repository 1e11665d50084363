import numpy as np
import pytest
import yaml

from src.config import SEED_ENV
from src.errors import GridMismatchError
from src.jobs import (
    EXIT_ASSERTION,
    EXIT_ERROR,
    EXIT_OK,
    coarsen,
    l1_distance,
    log_log_slope,
    run_compare,
    run_exactcheck,
    run_pde,
    run_selfdiff,
    run_simulate,
    time_averaged_distance,
)
from src.jobs import cli
from src.jobs.common import exit_code
from src.orchestration import Status
from src.store import get_store


@pytest.fixture(autouse=True)
def no_seed_override(monkeypatch):
    monkeypatch.delenv(SEED_ENV, raising=False)


# ============================================================================
# SIMULATE
# ============================================================================


def test_simulate_writes_every_artifact(run_config):
    result = run_simulate(run_config)
    store = get_store(run_config.output_dir)
    assert len(result.replicas) == 2
    assert result.mean_histograms.shape == (3, 4, 4, 4)

    rows = store.read_series("N8/series.csv")
    assert len(rows) == 2 * 3
    assert {row.particles for row in rows if row.replica == 0} == {result.replicas[0].rows[0].particles}
    assert (store.root / "N8/fields/r001_t002.ndjson").exists()
    assert (store.root / "N8/snapshots/r000_t000.ndjson").exists()
    mean, meta = store.read_tensor("N8/fields/mean_t001")
    assert meta["time"] == 0.005
    np.testing.assert_allclose(mean, result.mean_histograms[1])

    manifest = store.read_manifest()
    assert manifest.command == "simulate"
    assert "N8/dynamics/1" in manifest.substreams
    assert store.read_run_log()[-1].status == "completed"


def test_simulate_is_reproducible(make_config, tmp_path):
    first = run_simulate(make_config())
    second = run_simulate(make_config(paths={"output": str(tmp_path / "again")}))
    for a, b in zip(first.replicas, second.replicas):
        for x, y in zip(a.configurations, b.configurations):
            assert x.same_state(y)
    np.testing.assert_array_equal(first.mean_histograms, second.mean_histograms)


def test_cluster_means(run_config):
    clusters = run_simulate(run_config).cluster_means()
    assert set(clusters) == {1, 2}
    assert clusters[1] >= clusters[2]


# ============================================================================
# PDE, SELFDIFF, EXACTCHECK
# ============================================================================


def test_pde_report(run_config):
    report = run_pde(run_config)
    store = get_store(run_config.output_dir)
    assert report["assertions"]["mass_conservation"]
    assert report["mass_drift"] < 1e-12
    assert len(report["residuals"]) == 4
    assert store.read_json("pde/report.json")["steps"] == report["steps"]
    masses, meta = store.read_tensor("pde/trajectory")
    assert masses.shape == (3, 8, 8, 4)
    assert len(store.read_frame("pde/summary.csv")) == 3


def test_selfdiff_table(run_config):
    report = run_selfdiff(run_config)
    store = get_store(run_config.output_dir)
    assert report["assertions"]["pinned_endpoints"]
    table = store.read_ds_table()
    assert table.ds(0.0) == pytest.approx(1.0)
    assert table.ds(1.0) == pytest.approx(0.0)
    assert np.all(np.diff(table.fitted) <= 0)
    assert len(store.read_frame("selfdiff/estimates.csv")) == len(run_config.selfdiff.grid)


def test_exactcheck_suite(run_config):
    verdicts = run_exactcheck(run_config)
    assert verdicts
    assert all(v.passed for v in verdicts)
    assert "martingale_variance_slope" in {v.name for v in verdicts}
    assert get_store(run_config.output_dir).read_verdicts() == verdicts


# ============================================================================
# COMPARE
# ============================================================================


def test_compare_over_two_sides(run_config):
    state = run_compare(run_config)
    assert state.status == Status.COMPLETE
    assert set(state.distances) == {8, 16}
    assert all(d >= 0 for d in state.distances.values())
    assert state.slope is not None
    assert {"strictly_decreasing", "ratio", "noise_floor", "clusters_nonincreasing_N8"} <= set(state.assertions)
    report = get_store(run_config.output_dir).read_json("compare/report.json")
    assert report["status"] == "complete"


def test_compare_needs_a_common_grid(make_config):
    with pytest.raises(GridMismatchError):
        run_compare(make_config(observation={"cells": None}))
    with pytest.raises(GridMismatchError):
        run_compare(make_config(), sides=[12])


def test_coarsen_and_distances():
    fine = np.arange(4 * 4 * 2, dtype=np.float64).reshape(4, 4, 2)
    coarse = coarsen(fine, 2)
    assert coarse.shape == (2, 2, 2)
    assert coarse[0, 0, 0] == pytest.approx(np.mean([0, 2, 8, 10]))
    with pytest.raises(GridMismatchError):
        coarsen(fine, 3)

    assert l1_distance(coarse, coarse) == 0.0
    assert l1_distance(np.zeros((2, 2, 1)), np.ones((2, 2, 1))) == pytest.approx(1.0)
    with pytest.raises(GridMismatchError):
        l1_distance(coarse, fine)
    schedule = np.stack([np.zeros((2, 2, 1)), np.ones((2, 2, 1))])
    assert time_averaged_distance(schedule, np.zeros_like(schedule)) == pytest.approx(0.5)


def test_log_log_slope():
    sides = [16, 32, 64]
    assert log_log_slope(sides, [1.0 / n for n in sides]) == pytest.approx(-1.0)


# ============================================================================
# EXIT CODES
# ============================================================================


def test_exit_codes():
    def fail():
        raise GridMismatchError("grids do not nest")

    assert exit_code(lambda: True) == EXIT_OK
    assert exit_code(lambda: False) == EXIT_ASSERTION
    assert exit_code(fail) == EXIT_ERROR


def test_cli_dispatch(run_config, tmp_path):
    path = tmp_path / "small.yaml"
    path.write_text(yaml.safe_dump(run_config.model_dump()))
    assert cli.main(["exactcheck", "--config", str(path), "--pairs", "3"]) == EXIT_OK

    broken = run_config.model_dump()
    broken["observation"]["cells"] = None
    path.write_text(yaml.safe_dump(broken))
    assert cli.main(["compare", "--config", str(path)]) == EXIT_ERROR

    with pytest.raises(SystemExit):
        cli.main(["render"])
