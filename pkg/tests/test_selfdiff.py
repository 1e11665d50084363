import json

import numpy as np
import pytest

from src.errors import TableNotBuiltError
from src.selfdiff import NORMALIZATION, DsTable, build_ds_table, estimate_ds, jackknife, palm_configuration


def test_jackknife_of_the_mean_is_the_standard_error():
    values = np.array([1.0, 2.0, 4.0, 7.0])
    mean, se = jackknife(values)
    assert mean == pytest.approx(3.5)
    assert se == pytest.approx(values.std(ddof=1) / 2)
    _, single = jackknife(values[:1])
    assert single == 0.0


def test_palm_configuration_occupies_the_origin(rng):
    assert palm_configuration(0.0, 8, rng).particle_count == 1
    config = palm_configuration(0.3, 8, rng)
    assert config.occupancy[0] == 1


# ============================================================================
# TABLE
# ============================================================================


def test_fitted_table_is_monotone_and_pinned():
    table = DsTable.from_estimates(
        [0.0, 0.25, 0.5, 0.75, 1.0],
        [0.97, 0.6, 0.65, 0.2, 0.03],
        [0.02, 0.02, 0.02, 0.02, 0.02],
    )
    assert table.fitted[0] == 1.0
    assert table.fitted[-1] == 0.0
    assert np.all(np.diff(table.fitted) <= 0)
    # the inverted pair is pooled
    assert table.fitted[1] == pytest.approx(table.fitted[2])

    rho = np.linspace(0, 1, 101)
    values = table.ds(rho)
    assert np.all(np.diff(values) <= 1e-12)
    assert np.all((values >= 0) & (values <= 1))
    assert np.all(table.ds_prime(rho) <= 1e-12)


def test_mean_field_closure():
    table = DsTable.mean_field()
    assert table.ds(0.3) == pytest.approx(0.7)
    assert table.ds_prime(0.3) == pytest.approx(-1.0)
    assert table.ratio_constant() == pytest.approx(1.0)
    assert table.source == "mean-field"


def test_grid_must_span_zero_to_one():
    with pytest.raises(ValueError):
        DsTable.from_estimates([0.0, 0.5], [1.0, 0.5])
    with pytest.raises(ValueError):
        DsTable.from_estimates([0.0, 0.5, 0.5, 1.0], [1.0, 0.5, 0.5, 0.0])


def test_unbuilt_table_refuses_lookups():
    with pytest.raises(TableNotBuiltError):
        DsTable().ds(0.5)
    with pytest.raises(TableNotBuiltError):
        DsTable().to_frame()


def test_save_and_load(tmp_path):
    table = DsTable.from_estimates([0.0, 0.5, 1.0], [1.0, 0.4, 0.0], [0.0, 0.01, 0.0], budget={"N": 16})
    path = table.save(tmp_path / "tables" / "ds.csv")
    sidecar = json.loads(path.with_suffix(".csv.json").read_text())
    assert sidecar["normalization"] == NORMALIZATION
    assert sidecar["budget"] == {"N": 16}

    loaded = DsTable.load(path)
    np.testing.assert_allclose(loaded.fitted, table.fitted)
    assert loaded.ds(0.25) == pytest.approx(table.ds(0.25))
    assert loaded.budget == {"N": 16}


def test_ratio_constant():
    table = DsTable.from_estimates([0.0, 0.5, 1.0], [1.0, 0.25, 0.0])
    # d_s(0.5) / (1 - 0.5) = 0.5
    assert table.ratio_constant() == pytest.approx(2.0)


# ============================================================================
# ESTIMATES
# ============================================================================


def test_full_lattice_does_not_move():
    result = estimate_ds(1.0, 8, 0.1, 4)
    assert result.estimate == 0.0
    assert result.raw == 0.0


def test_bad_arguments():
    with pytest.raises(ValueError):
        estimate_ds(1.5, 8, 0.1, 4)
    with pytest.raises(ValueError):
        estimate_ds(0.5, 8, 0.0, 4)
    with pytest.raises(ValueError):
        estimate_ds(0.5, 4, 0.1, 4)


def test_free_tracer_has_unit_coefficient():
    result = estimate_ds(0.0, 8, 0.5, 400, seed=12)
    assert result.estimate == pytest.approx(1.0, abs=0.3)
    assert result.stderr > 0
    assert result.environment_density == 0.0
    assert result.to_dict()["raw"] == pytest.approx(2 * result.estimate)


def test_crowding_slows_the_tracer():
    free = estimate_ds(0.0, 8, 0.2, 100, seed=4)
    crowded = estimate_ds(0.8, 8, 0.2, 100, seed=4)
    assert crowded.estimate < free.estimate


def test_build_table_is_reproducible():
    a, results = build_ds_table([0.0, 0.5, 1.0], side=8, horizon=0.02, replicas=4, seed=3)
    b, _ = build_ds_table([0.0, 0.5, 1.0], side=8, horizon=0.02, replicas=4, seed=3)
    np.testing.assert_array_equal(a.estimates, b.estimates)
    assert [r.rho for r in results] == [0.0, 0.5, 1.0]
    assert a.fitted[0] == 1.0 and a.fitted[-1] == 0.0
    assert a.budget == {"N": 8, "T": 0.02, "replicas": 4}
