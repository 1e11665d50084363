"""
Weak-form residual of a stored solution.

For a test function H(t, u, theta) the weak formulation requires

    <pi_T, H_T> - <pi_0, H_0> - int_0^T <pi_t, d_t H_t> dt
        - int_0^T ( sum_i <d_s rho_hat, d_ii H> - <D d_i rho - d_s' rho_hat d_i rho, d_i H>
                    + 2 lambda <s Omega_i + d_s rho_hat e_i, d_i H> + <Gamma, H> ) dt = 0.

Space and angle integrals use the midpoint rule: cell sums times h^2 at
cell centers, and bin centers for theta. d_i rho is a centered difference.
The time integral is the trapezoid rule over the stored slices, which sit
at the interval ends; its error is O((T / slices)^2).
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.integrate import trapezoid

from src.errors import GridMismatchError
from src.lattice import TWO_PI, bin_centers
from src.selfdiff import DsTable

from .coefficients import coeff_d, coeff_s, omega_vector
from .field import bin_directions
from .solver import PdeTrajectory, creation_term


@dataclass(frozen=True)
class TestFunction:
    """
    H with its analytic derivatives. Every callable takes (t, u1, u2, theta)
    broadcast to (L, L, M); `grad` and `second` also take the axis (0 or 1).
    """

    __test__ = False

    value: Callable
    dt: Callable
    grad: Callable
    second: Callable

    def __add__(self, other: "TestFunction") -> "TestFunction":
        return TestFunction(
            value=lambda *a: self.value(*a) + other.value(*a),
            dt=lambda *a: self.dt(*a) + other.dt(*a),
            grad=lambda *a: self.grad(*a) + other.grad(*a),
            second=lambda *a: self.second(*a) + other.second(*a),
        )

    @classmethod
    def plane_wave(
        cls,
        k1: int = 1,
        k2: int = 0,
        angular: int = 0,
        phase: float = 0.0,
        growth: float = 0.0,
    ) -> "TestFunction":
        """H = exp(growth t) cos(2 pi (k1 u1 + k2 u2) + angular theta + phase)."""
        wave = (TWO_PI * k1, TWO_PI * k2)

        def arg(u1, u2, theta):
            return wave[0] * u1 + wave[1] * u2 + angular * theta + phase

        def value(t, u1, u2, theta):
            return np.exp(growth * t) * np.cos(arg(u1, u2, theta))

        def dt(t, u1, u2, theta):
            return growth * value(t, u1, u2, theta)

        def grad(t, u1, u2, theta, axis):
            return -wave[axis] * np.exp(growth * t) * np.sin(arg(u1, u2, theta))

        def second(t, u1, u2, theta, axis):
            return -wave[axis] ** 2 * value(t, u1, u2, theta)

        return cls(value=value, dt=dt, grad=grad, second=second)


def _grid(cells: int, bins: int):
    u = (np.arange(cells) + 0.5) / cells
    return (
        u[:, None, None],
        u[None, :, None],
        bin_centers(bins)[None, None, :],
    )


def weak_bracket(
    masses: np.ndarray,
    t: float,
    H: TestFunction,
    table: DsTable,
    drift: float,
    reaction_term: Optional[np.ndarray],
) -> float:
    """Integrand of the time integral at one slice (without <pi_t, d_t H>)."""
    cells, _, bins = masses.shape
    h = 1.0 / cells
    u1, u2, theta = _grid(cells, bins)
    rho = masses.sum(axis=-1)
    ds = np.asarray(table.ds(rho))[..., None]
    ds_prime = np.asarray(table.ds_prime(rho))[..., None]
    d_coef = coeff_d(masses, rho, table)
    s_coef = coeff_s(masses, rho, table)
    omega = omega_vector(masses)
    directions = bin_directions(bins)

    total = np.zeros_like(masses)
    for axis in (0, 1):
        grad_rho = (np.roll(rho, -1, axis=axis) - np.roll(rho, 1, axis=axis))[..., None] / (2 * h)
        grad_h = H.grad(t, u1, u2, theta, axis)
        total += ds * masses * H.second(t, u1, u2, theta, axis)
        total -= (d_coef - ds_prime * masses) * grad_rho * grad_h
        if drift:
            flow = s_coef * omega[..., axis, None] + ds * masses * directions[:, axis]
            total += 2.0 * drift * flow * grad_h
    if reaction_term is not None:
        total += reaction_term * H.value(t, u1, u2, theta)
    return float(total.sum()) * h * h


def pairing(masses: np.ndarray, t: float, fn: Callable) -> float:
    """<pi_t, fn(t)> = sum over cells and bins of rho_hat fn, times h^2."""
    cells, _, bins = masses.shape
    u1, u2, theta = _grid(cells, bins)
    return float((masses * fn(t, u1, u2, theta)).sum()) / cells**2


def weak_form_residual(
    trajectory: PdeTrajectory,
    H: TestFunction,
    table: DsTable,
    rng: Optional[np.random.Generator] = None,
) -> float:
    """Left side minus right side of the weak formulation over the stored slices."""
    times = np.asarray(trajectory.times, dtype=np.float64)
    masses = trajectory.masses
    if masses.ndim != 4 or masses.shape[0] != times.size:
        raise GridMismatchError("trajectory slices and times do not match")
    if times.size < 2:
        raise GridMismatchError("need at least two time slices")
    steps = np.diff(times)
    if not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
        raise GridMismatchError("weak-form residual needs regularly spaced slices")

    config = trajectory.config
    if rng is None:
        rng = np.random.default_rng(0)
    integrand = []
    for t, slice_ in zip(times, masses):
        reaction = creation_term(slice_, config, rng) if config.reaction else None
        integrand.append(
            pairing(slice_, t, H.dt)
            + weak_bracket(slice_, t, H, table, config.drift, reaction)
        )
    boundary = pairing(masses[-1], times[-1], H.value) - pairing(masses[0], times[0], H.value)
    return boundary - float(trapezoid(integrand, times))
