"""
Conservative finite-difference solver for the hydrodynamic equation

    d rho_hat = div( D grad rho + grad(d_s rho_hat) - d_s' rho_hat grad rho )
                - 2 lambda div( s Omega + d_s rho_hat e_theta ) + Gamma

on the periodic L x L grid with M angle bins. Fluxes live on cell faces;
the face value of d_s' is the secant slope of d_s between the two cells, so
that the angle-summed diffusive flux is exactly the discrete gradient of rho.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence

import numpy as np

from src.errors import GridMismatchError, StabilityError
from src.selfdiff import DsTable

from .coefficients import coeff_d, drift_velocity
from .creation import creation_rate, creation_two_type_exact, creation_uniform
from .field import AngularDensityField, PdeConfig, dirichlet_energy

logger = logging.getLogger(__name__)

NEGATIVITY_TOLERANCE = 1e-10
SECANT_TOLERANCE = 1e-12


def stable_dt(config: PdeConfig) -> float:
    """cfl * min(h^2, h / (4 lambda))."""
    h = config.h
    bound = h * h
    if config.drift > 0:
        bound = min(bound, h / (4.0 * config.drift))
    return config.cfl * bound


def load_table(config: PdeConfig) -> DsTable:
    if config.ds_table:
        return DsTable.load(config.ds_table)
    return DsTable.mean_field()


# =============================================================================
# FLUXES
# =============================================================================


def _minmod(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.where(a * b > 0, np.sign(a) * np.minimum(np.abs(a), np.abs(b)), 0.0)


def diffusive_flux(masses, rho, ds, table: DsTable, axis: int, h: float) -> np.ndarray:
    """Flux through the face between each cell and its +1 neighbour along `axis`."""
    d_here = coeff_d(masses, rho, table)
    m_next = np.roll(masses, -1, axis=axis)
    rho_next = np.roll(rho, -1, axis=axis)
    ds_next = np.roll(ds, -1, axis=axis)
    drho = rho_next - rho

    flat = np.abs(drho) <= SECANT_TOLERANCE
    secant = (ds_next - ds) / np.where(flat, 1.0, drho)
    slope = np.where(flat, table.ds_prime(0.5 * (rho + rho_next)), secant)

    d_face = 0.5 * (d_here + np.roll(d_here, -1, axis=axis))
    m_face = 0.5 * (masses + m_next)
    flux = (
        d_face * drho[..., None]
        + ds_next[..., None] * m_next
        - ds[..., None] * masses
        - slope[..., None] * m_face * drho[..., None]
    )
    return flux / h


def drift_flux(masses, velocity_axis, axis: int, limiter: bool) -> np.ndarray:
    """Drift flux rho_hat V through the +1 face along `axis`."""
    if not limiter:
        cell = masses * velocity_axis
        return 0.5 * (cell + np.roll(cell, -1, axis=axis))
    m_prev = np.roll(masses, 1, axis=axis)
    m_next = np.roll(masses, -1, axis=axis)
    m_next2 = np.roll(masses, -2, axis=axis)
    left = masses + 0.5 * _minmod(masses - m_prev, m_next - masses)
    right = m_next - 0.5 * _minmod(m_next - masses, m_next2 - m_next)
    v_face = 0.5 * (velocity_axis + np.roll(velocity_axis, -1, axis=axis))
    return np.where(v_face >= 0, v_face * left, v_face * right)


def creation_term(masses, config: PdeConfig, rng: Optional[np.random.Generator]) -> np.ndarray:
    if config.beta == 0.0:
        return creation_uniform(masses)
    if config.two_type:
        return creation_two_type_exact(masses, config.beta)
    return creation_rate(masses, config.beta, config.gamma_samples, rng)


def pde_rhs(masses: np.ndarray, config: PdeConfig, table: DsTable, rng=None) -> np.ndarray:
    h = config.h
    rho = masses.sum(axis=-1)
    ds = np.asarray(table.ds(rho))
    rate = np.zeros_like(masses)
    velocity = drift_velocity(masses, rho, table, config.drift) if config.drift > 0 else None
    for axis in (0, 1):
        flux = diffusive_flux(masses, rho, ds, table, axis, h)
        if velocity is not None:
            flux = flux - drift_flux(masses, velocity[..., axis], axis, config.limiter)
        rate += (flux - np.roll(flux, 1, axis=axis)) / h
    if config.reaction:
        rate += creation_term(masses, config, rng)
    return rate


# =============================================================================
# TIME STEPPING
# =============================================================================


def _clamp(masses: np.ndarray, time: float) -> np.ndarray:
    low = float(masses.min())
    if low >= -NEGATIVITY_TOLERANCE:
        return masses
    total = masses.sum()
    clamped = np.maximum(masses, 0.0)
    if clamped.sum() > 0:
        clamped *= total / clamped.sum()
    logger.warning(
        "negative bin mass %.3e at t=%.6f clamped; total mass restored (factor %.12f)",
        low, time, total / max(clamped.sum(), 1e-300),
    )
    return clamped


def _advance(masses, dt, config: PdeConfig, table: DsTable, rng, time: float) -> np.ndarray:
    k1 = pde_rhs(masses, config, table, rng)
    if config.scheme == "heun":
        k2 = pde_rhs(masses + dt * k1, config, table, rng)
        new = masses + 0.5 * dt * (k1 + k2)
    else:
        new = masses + dt * k1
    return _clamp(new, time + dt)


def step_pde(
    field: AngularDensityField,
    config: PdeConfig,
    table: DsTable,
    rng: Optional[np.random.Generator] = None,
    dt: Optional[float] = None,
) -> AngularDensityField:
    """One explicit step of size dt (config.dt by default)."""
    dt = config.dt if dt is None else dt
    bound = stable_dt(config)
    if dt > bound * (1.0 + 1e-12):
        raise StabilityError(f"dt={dt:.3e} exceeds the stability bound {bound:.3e}")
    if field.cells != config.cells or field.bins != config.bins:
        raise GridMismatchError(
            f"field grid {field.masses.shape} does not match L={config.cells}, M={config.bins}"
        )
    new = _advance(field.masses, dt, config, table, rng, field.time)
    return AngularDensityField(new, field.time + dt)


@dataclass
class PdeTrajectory:
    """Field slices at the recorded times."""

    times: np.ndarray
    masses: np.ndarray
    config: PdeConfig
    steps: int = 0
    dirichlet: np.ndarray = field(init=False)

    def __post_init__(self):
        self.dirichlet = np.array([dirichlet_energy(m.sum(axis=-1)) for m in self.masses])

    @property
    def density(self) -> np.ndarray:
        return self.masses.sum(axis=-1)

    @property
    def total_mass(self) -> np.ndarray:
        return self.density.sum(axis=(1, 2)) / self.config.cells**2

    def slice_at(self, index: int) -> AngularDensityField:
        return AngularDensityField(self.masses[index], float(self.times[index]))

    def metadata(self) -> Dict[str, Any]:
        return {
            "times": self.times.tolist(),
            "shape": list(self.masses.shape),
            "steps": self.steps,
            "pde": self.config.to_dict(),
        }


def solve_pde(
    initial: AngularDensityField,
    config: PdeConfig,
    table: Optional[DsTable] = None,
    record_times: Optional[Sequence[float]] = None,
    rng: Optional[np.random.Generator] = None,
) -> PdeTrajectory:
    """
    Integrate from initial.time through the sorted record times (default:
    start and horizon). Each interval is split into equal steps no longer
    than config.dt.
    """
    if table is None:
        table = load_table(config)
    if rng is None:
        rng = np.random.default_rng(0)
    if record_times is None:
        record_times = [initial.time, initial.time + config.horizon]
    times = np.asarray(record_times, dtype=np.float64)
    if np.any(np.diff(times) < 0) or times[0] < initial.time:
        raise ValueError("record times must be sorted and not before the initial time")

    field_ = initial.copy()
    slices = []
    steps = 0
    for target in times:
        span = target - field_.time
        n = max(0, math.ceil(span / config.dt - 1e-9)) if span > 0 else 0
        for _ in range(n):
            field_ = step_pde(field_, config, table, rng, dt=span / n)
            steps += 1
        field_.time = float(target)
        slices.append(field_.masses.copy())
        logger.debug("pde slice t=%.5f mass=%.12f", target, field_.total_mass)
    return PdeTrajectory(times=times, masses=np.array(slices), config=config, steps=steps)


# =============================================================================
# TWO-TYPE SYSTEM
# =============================================================================


def two_type_rhs(plus: np.ndarray, minus: np.ndarray, config: PdeConfig, table: DsTable):
    """
    Right-hand side of the two-type system written in (rho+, rho-): drift
    along u_1 only, 2 lambda d_1[m s(rho^sigma) + sigma d_s rho^sigma] for sigma = +-1,
    centered fluxes, exact creation term.
    """
    h = config.h
    rho = plus + minus
    m = plus - minus
    ds = np.asarray(table.ds(rho))
    safe = np.where(rho > 0, rho, 1.0)
    out = []
    for sign, part in ((1.0, plus), (-1.0, minus)):
        share = np.where(rho > 0, part / safe, 0.0)
        diff_coef = share * (1.0 - ds)
        rate = np.zeros_like(part)
        for axis in (0, 1):
            face_d = 0.5 * (diff_coef + np.roll(diff_coef, -1, axis=axis))
            face_ds = 0.5 * (ds + np.roll(ds, -1, axis=axis))
            flux = (
                face_d * (np.roll(rho, -1, axis=axis) - rho)
                + face_ds * (np.roll(part, -1, axis=axis) - part)
            ) / h
            if axis == 0 and config.drift > 0:
                cell = 2.0 * config.drift * (m * share * (1.0 - rho - ds) + sign * ds * part)
                flux = flux - 0.5 * (cell + np.roll(cell, -1, axis=axis))
            rate += (flux - np.roll(flux, 1, axis=axis)) / h
        out.append(rate)
    if config.reaction:
        gamma = creation_two_type_exact(np.stack([plus, minus], axis=-1), config.beta)
        out[0] = out[0] + gamma[..., 0]
        out[1] = out[1] + gamma[..., 1]
    return out[0], out[1]


def step_two_type(plus, minus, config: PdeConfig, table: DsTable, dt: Optional[float] = None):
    """Explicit Euler step of the two-type system."""
    dt = config.dt if dt is None else dt
    if dt > stable_dt(config) * (1.0 + 1e-12):
        raise StabilityError(f"dt={dt:.3e} exceeds the stability bound {stable_dt(config):.3e}")
    d_plus, d_minus = two_type_rhs(plus, minus, config, table)
    return plus + dt * d_plus, minus + dt * d_minus
