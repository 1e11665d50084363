import numpy as np
import pytest

from src.exactcheck import Verdict
from src.observables import mollified_density
from src.selfdiff import DsTable
from src.store import Manifest, RunStore, SeriesRow, config_hash, get_store


@pytest.fixture
def store(tmp_path):
    return RunStore(tmp_path / "out")


def test_get_store_is_cached(tmp_path):
    assert get_store(tmp_path / "a") is get_store(tmp_path / "a")
    assert get_store(tmp_path / "a") is not get_store(tmp_path / "b")


def test_config_hash_ignores_key_order():
    assert config_hash({"a": 1, "b": [1, 2]}) == config_hash({"b": [1, 2], "a": 1})
    assert config_hash({"a": 1}) != config_hash({"a": 2})


def test_field_roundtrip(store, random_config):
    snapshot = mollified_density(random_config, 0.25, 4, time=0.5, cells=2)
    path = store.write_field("fields/t0", snapshot)
    lines = path.read_text().splitlines()
    assert len(lines) == 1 + 4
    back = store.read_field("fields/t0")
    np.testing.assert_array_equal(back.histogram, snapshot.histogram)
    np.testing.assert_array_equal(back.magnetization, snapshot.magnetization)
    np.testing.assert_array_equal(back.mass, snapshot.mass)
    assert "fields/t0.npy" in store.artifacts


def test_configuration_snapshot(store, random_config):
    store.write_configuration("snapshots/c.ndjson", random_config, seed=4, time=0.1)
    config, header = store.read_configuration("snapshots/c.ndjson")
    assert config.same_state(random_config)
    assert header["seed"] == 4


def test_series_roundtrip(store):
    rows = [
        SeriesRow(replica=0, time=0.0, particles=10, density=0.4, magnetization_x=0.1, magnetization_y=-0.2,
                  clusters={"full_cluster_p1": 0.05}),
        SeriesRow(replica=0, time=0.5, particles=10, density=0.4, magnetization_x=0.0, magnetization_y=0.0,
                  events=120, accepted=80, clusters={"full_cluster_p1": 0.0}),
    ]
    store.write_series("series.csv", rows)
    back = store.read_series("series.csv")
    assert back[1].events == 120
    assert back[0].clusters == {"full_cluster_p1": 0.05}
    assert back[0].magnetization_y == -0.2


def test_ds_table_and_json(store):
    store.write_ds_table(DsTable.mean_field())
    assert store.read_ds_table().ds(0.25) == pytest.approx(0.75)
    store.write_json("report.json", {"value": np.float64(1.5), "array": np.arange(3)})
    assert store.read_json("report.json") == {"value": 1.5, "array": [0, 1, 2]}
    assert "ds_table.csv.json" in store.artifacts


def test_verdicts_roundtrip(store):
    verdicts = [Verdict.upper("a", 0.0), Verdict.lower("b", 1.0, note="control")]
    store.write_verdicts(verdicts)
    assert store.read_verdicts() == verdicts


def test_manifest(store):
    store.write_json("x.json", {})
    manifest = store.write_manifest("simulate", {"model": {"side": 8}}, 7, substreams={"replica-0": [7, 1, 0]})
    back = store.read_manifest()
    assert isinstance(back, Manifest)
    assert back.config_hash == config_hash({"model": {"side": 8}})
    assert back.artifacts == ["x.json"]
    assert back.substreams == {"replica-0": [7, 1, 0]}
    assert back.completed_at == manifest.completed_at


def test_run_log(store):
    first = store.log_run_start("simulate", target="N=8")
    store.log_run_complete(first, replicas=2)
    second = store.log_run_start("pde")
    store.log_run_error(second, "StabilityError: dt too large")
    entries = store.read_run_log()
    assert [e.status for e in entries] == ["started", "completed", "started", "failed"]
    assert second == first + 1
    assert entries[1].counts == {"replicas": 2}
    assert entries[1].target == "N=8"
    assert entries[3].job_type == "pde"
    assert entries[1].duration_ms >= 0
