"""
Exact identities of the generators, evaluated on a TinyModel.

Every check returns a max-abs defect (or a residual for the stationarity
negative controls); the verdict layer compares it with a tolerance.
"""

from typing import Callable, Optional

import numpy as np
import scipy.sparse as sp
from scipy.linalg import null_space
from scipy.sparse.csgraph import connected_components

from src.hydro import flip_law

from .generators import GeneratorSet, build_generators
from .tiny import SPIN, TinyModel

Omega = Callable[[np.ndarray], np.ndarray]

# omega evaluated on the digit alphabet {empty, 0, pi}; the empty value is never used
OMEGAS = {
    "one": lambda d: np.ones_like(d, dtype=np.float64),
    "cos": lambda d: SPIN[d].astype(np.float64),
    "sin": lambda d: np.zeros_like(d, dtype=np.float64),
}


def max_abs(values) -> float:
    if sp.issparse(values):
        values = sp.csr_matrix(values).data
    values = np.asarray(values)
    return float(np.max(np.abs(values))) if values.size else 0.0


def row_sum_defect(matrix: sp.spmatrix) -> float:
    return max_abs(np.asarray(matrix.sum(axis=1)).ravel())


def self_adjoint_defect(matrix: sp.spmatrix, weights: np.ndarray) -> float:
    """||D L - L^T D||_max with D = diag(weights)."""
    d = sp.diags(weights)
    return max_abs(d @ matrix - matrix.T @ d)


# =============================================================================
# CURRENTS
# =============================================================================


def weighted_occupation(model: TinyModel, x: int, omega: Omega) -> np.ndarray:
    """eta^omega_x as a vector over states."""
    d = model.digits[:, x]
    return np.where(d > 0, omega(d), 0.0)


def symmetric_current(model: TinyModel, x: int, axis: int, omega: Omega) -> np.ndarray:
    """j^omega_i at x: eta^w_x (1 - eta_{x+e_i}) - eta^w_{x+e_i} (1 - eta_x)."""
    y = model.neighbor(x, axis, 1)
    occ = model.occupancy
    return (
        weighted_occupation(model, x, omega) * (1 - occ[:, y])
        - weighted_occupation(model, y, omega) * (1 - occ[:, x])
    )


def asymmetric_current(model: TinyModel, x: int, axis: int, omega: Omega) -> np.ndarray:
    """jt^omega_i at x: eta^{w lambda_i}_x (1 - eta_{x+e_i}) + eta^{w lambda_i}_{x+e_i} (1 - eta_x)."""
    y = model.neighbor(x, axis, 1)
    occ = model.occupancy
    spin = model.spin.astype(np.float64)
    lam_x = model.drift * spin[:, x] if axis == 0 else np.zeros(model.n_states)
    lam_y = model.drift * spin[:, y] if axis == 0 else np.zeros(model.n_states)
    return (
        weighted_occupation(model, x, omega) * lam_x * (1 - occ[:, y])
        + weighted_occupation(model, y, omega) * lam_y * (1 - occ[:, x])
    )


def _active_axes(model: TinyModel):
    return [axis for axis, width in enumerate((model.n1, model.n2)) if width >= 2]


def current_identity_defect(
    model: TinyModel,
    generators: Optional[GeneratorSet] = None,
    asymmetric: bool = False,
) -> float:
    """
    max over x, omega of || A eta^w_x - sum_i (tau_{x-e_i} j_i - tau_x j_i) ||,
    with A = L and j the symmetric current, or A = L^WA and the asymmetric one.
    """
    gens = generators or build_generators(model)
    matrix = gens.asymmetric if asymmetric else gens.symmetric
    current = asymmetric_current if asymmetric else symmetric_current
    worst = 0.0
    for omega in OMEGAS.values():
        for x in range(model.n_sites):
            lhs = matrix @ weighted_occupation(model, x, omega)
            rhs = np.zeros(model.n_states)
            for axis in _active_axes(model):
                back = model.neighbor(x, axis, -1)
                rhs += current(model, back, axis, omega) - current(model, x, axis, omega)
            worst = max(worst, max_abs(lhs - rhs))
    return worst


def total_drift_current(model: TinyModel) -> np.ndarray:
    """sum_x sum_i tau_x j^{lambda_i}_i as a vector over states."""
    occ = model.occupancy
    spin = model.spin.astype(np.float64)
    total = np.zeros(model.n_states)
    if 0 not in _active_axes(model):
        return total
    for x in range(model.n_sites):
        y = model.neighbor(x, 0, 1)
        total += model.drift * (spin[:, x] * (1 - occ[:, y]) - spin[:, y] * (1 - occ[:, x]))
    return total


def adjoint_check(model: TinyModel, alpha: float = 0.5, generators: Optional[GeneratorSet] = None) -> float:
    """
    ||L^{WA,*} + L^WA + 2 M_j||_max under mu*_alpha, where L^{WA,*} =
    D^{-1} (L^WA)^T D and M_j multiplies by sum_x sum_i tau_x j^{lambda_i}_i.
    """
    gens = generators or build_generators(model)
    weights = model.reference_weights(alpha)
    a = gens.asymmetric
    adjoint = sp.diags(1.0 / weights) @ a.T @ sp.diags(weights)
    return max_abs(adjoint + a + 2.0 * sp.diags(total_drift_current(model)))


def stationarity_check(model: TinyModel, alpha: float = 0.5, generators: Optional[GeneratorSet] = None) -> float:
    """||mu^T L_N||_inf for mu = mu*_alpha (zero iff mu*_alpha is invariant)."""
    gens = generators or build_generators(model)
    weights = model.reference_weights(alpha)
    return max_abs(gens.full().T @ weights)


# =============================================================================
# DIRICHLET FORM
# =============================================================================


def dirichlet_form(model: TinyModel, h: np.ndarray, weights: np.ndarray, generators=None) -> float:
    """-E_mu(h L h) through the matrix."""
    gens = generators or build_generators(model)
    return float(-np.dot(weights * h, gens.symmetric @ h))


def dirichlet_form_gradients(model: TinyModel, h: np.ndarray, weights: np.ndarray) -> float:
    """(1/2) E_mu( sum_x sum_z eta_x (1 - eta_{x+z}) (h(eta^{x,x+z}) - h(eta))^2 ), by direct enumeration."""
    occ = model.occupancy
    total = 0.0
    for x, y, _, _ in model.bonds:
        mask = (occ[:, x] == 1) & (occ[:, y] == 0)
        grad = h[model.swap_index(x, y)] - h
        total += float(np.sum(weights[mask] * grad[mask] ** 2))
    return 0.5 * total


def sector_labels(model: TinyModel, generators: Optional[GeneratorSet] = None) -> np.ndarray:
    """Connected components of the exchange graph (irreducible sectors of L)."""
    gens = generators or build_generators(model)
    adjacency = gens.symmetric - sp.diags(gens.symmetric.diagonal())
    _, labels = connected_components(adjacency, directed=False)
    return labels


def multiset_labels(model: TinyModel) -> np.ndarray:
    """(number of + particles, number of - particles) encoded as one label per state."""
    plus = (model.digits == 1).sum(axis=1)
    minus = (model.digits == 2).sum(axis=1)
    return plus * (model.n_sites + 1) + minus


def sectors_match_multisets(model: TinyModel, generators: Optional[GeneratorSet] = None) -> bool:
    """On states with >= 2 holes, sectors coincide with the angle-multiset classes."""
    labels = sector_labels(model, generators)
    classes = multiset_labels(model)
    holes = model.n_sites - model.occupancy.sum(axis=1)
    keep = holes >= 2
    pairs = set(zip(labels[keep].tolist(), classes[keep].tolist()))
    return len(pairs) == len(set(labels[keep].tolist())) == len(set(classes[keep].tolist()))


# =============================================================================
# GLAUBER
# =============================================================================


def glauber_two_state_check(beta: float, m: float) -> float:
    """
    One site with frozen neighbour field m: the flip chain on (+, -) has
    stationary law equal to the normalized two-atom weights.
    """
    p_plus, p_minus = flip_law(m, beta)
    q = np.array([[-p_minus, p_minus], [p_plus, -p_plus]])
    stationary = null_space(q.T)[:, 0]
    stationary = stationary / stationary.sum()
    return float(np.max(np.abs(stationary - np.array([p_plus, p_minus]))))
