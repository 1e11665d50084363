import dataclasses
import math

import numpy as np
import pytest

from src.config import PdeSection
from src.errors import GridMismatchError
from src.hydro import (
    AngularDensityField,
    PdeConfig,
    PdeTrajectory,
    TestFunction,
    pairing,
    solve_pde,
    stable_dt,
    weak_form_residual,
)
from src.selfdiff import DsTable

HORIZON = 0.05
DRIFT_HORIZON = 0.02


def _heat_trajectory(cells: int, bins: int = 4) -> PdeTrajectory:
    config = PdeConfig(cells=cells, bins=bins, dt=1.0)
    config = dataclasses.replace(config, dt=stable_dt(config))
    u = (np.arange(cells) + 0.5) / cells
    rho = 0.4 + 0.2 * np.cos(2 * math.pi * u)[:, None] * np.ones(cells)
    initial = AngularDensityField(np.repeat(rho[..., None] / bins, bins, axis=-1))
    return solve_pde(initial, config, DsTable.mean_field(), record_times=np.linspace(0, HORIZON, 11))


@pytest.fixture(scope="module")
def heat_runs():
    return {cells: _heat_trajectory(cells) for cells in (16, 32)}


def test_heat_solution_satisfies_the_weak_form(heat_runs):
    residual = weak_form_residual(heat_runs[32], TestFunction.plane_wave(1, 0), DsTable.mean_field())
    assert abs(residual) < 2e-3


def test_residual_shrinks_under_refinement(heat_runs):
    H = TestFunction.plane_wave(1, 0)
    coarse = abs(weak_form_residual(heat_runs[16], H, DsTable.mean_field()))
    fine = abs(weak_form_residual(heat_runs[32], H, DsTable.mean_field()))
    assert fine < coarse


def _drift_trajectory(cells: int, slices: int, bins: int = 4) -> PdeTrajectory:
    config = PdeConfig(cells=cells, bins=bins, dt=1.0, drift=1.0)
    config = dataclasses.replace(config, dt=stable_dt(config))
    u = (np.arange(cells) + 0.5) / cells
    rho = 0.4 + 0.2 * np.cos(2 * math.pi * u)[:, None] * np.ones(cells)
    initial = AngularDensityField(np.repeat(rho[..., None] / bins, bins, axis=-1))
    return solve_pde(initial, config, DsTable.mean_field(), record_times=np.linspace(0, DRIFT_HORIZON, slices))


def test_drift_residual_drops_under_refinement():
    slices = PdeSection().residual_slices
    H = TestFunction.plane_wave(1, 0) + TestFunction.plane_wave(1, 0, angular=1)
    coarse = abs(weak_form_residual(_drift_trajectory(64, slices), H, DsTable.mean_field()))
    fine = abs(weak_form_residual(_drift_trajectory(128, slices), H, DsTable.mean_field()))
    assert coarse >= 3.0 * fine


def test_time_integral_is_the_trapezoid_rule():
    # frozen uniform field: only <pi, d_t H> is integrated, and its trapezoid error has a closed form
    growth, horizon, slices = 3.0, 1.0, 11
    config = PdeConfig(cells=8, bins=4, dt=1e-3)
    times = np.linspace(0.0, horizon, slices)
    frozen = PdeTrajectory(
        times=times,
        masses=np.repeat(AngularDensityField.uniform(8, 4, 0.3).masses[None], slices, axis=0),
        config=config,
    )
    residual = weak_form_residual(frozen, TestFunction.plane_wave(0, 0, growth=growth), DsTable.mean_field())
    half = 0.5 * growth * horizon / (slices - 1)
    expected = 0.3 * math.expm1(growth * horizon) * (1.0 - half / math.tanh(half))
    assert residual == pytest.approx(expected, rel=1e-9)


def test_frozen_solution_is_rejected(heat_runs):
    run = heat_runs[32]
    frozen = PdeTrajectory(
        times=run.times,
        masses=np.repeat(run.masses[:1], run.times.size, axis=0),
        config=run.config,
    )
    residual = weak_form_residual(frozen, TestFunction.plane_wave(1, 0), DsTable.mean_field())
    assert abs(residual) > 0.05


def test_orthogonal_test_function_sees_nothing(heat_runs):
    # no mass in the (0, 1) mode and no angular structure
    H = TestFunction.plane_wave(0, 1) + TestFunction.plane_wave(1, 0, angular=1)
    assert abs(weak_form_residual(heat_runs[16], H, DsTable.mean_field())) < 1e-12


def test_pairing_of_a_constant():
    field = AngularDensityField.uniform(8, 4, 0.3)
    assert pairing(field.masses, 0.0, lambda t, u1, u2, theta: 1.0 + 0 * u1 * u2 * theta) == pytest.approx(0.3)


def test_plane_wave_derivatives():
    H = TestFunction.plane_wave(2, 1, phase=0.3, growth=-1.5)
    args = (0.2, np.array(0.1), np.array(0.7), np.array(1.0))
    step = 1e-6
    shifted = (0.2, np.array(0.1 + step), np.array(0.7), np.array(1.0))
    numeric = (H.value(*shifted) - H.value(*args)) / step
    assert H.grad(*args, 0) == pytest.approx(numeric, rel=1e-4)
    assert H.dt(*args) == pytest.approx(-1.5 * H.value(*args))


def test_residual_needs_regular_slices(heat_runs):
    run = heat_runs[16]
    irregular = PdeTrajectory(times=np.array([0.0, 0.01, 0.05]), masses=run.masses[[0, 1, 10]], config=run.config)
    with pytest.raises(GridMismatchError):
        weak_form_residual(irregular, TestFunction.plane_wave(), DsTable.mean_field())
    single = PdeTrajectory(times=run.times[:1], masses=run.masses[:1], config=run.config)
    with pytest.raises(GridMismatchError):
        weak_form_residual(single, TestFunction.plane_wave(), DsTable.mean_field())
