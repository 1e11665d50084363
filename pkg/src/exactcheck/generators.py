"""
Exact sparse generator matrices of the two-type model on a TinyModel.

Rows are the current state: (A f)(eta) = sum_xi A[eta, xi] f(xi).
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.special import expit

from .tiny import MINUS, PLUS, TinyModel


@dataclass
class GeneratorSet:
    symmetric: sp.csr_matrix
    asymmetric: sp.csr_matrix
    glauber: sp.csr_matrix
    model: TinyModel

    def full(self) -> sp.csr_matrix:
        """L_N = N^2 L + N L^WA + L^G."""
        n = self.model.n
        return (n * n * self.symmetric + n * self.asymmetric + self.glauber).tocsr()


def _assemble(rows, cols, data, n_states: int) -> sp.csr_matrix:
    if rows:
        rows = np.concatenate(rows)
        cols = np.concatenate(cols)
        data = np.concatenate(data)
    else:
        rows = cols = np.zeros(0, dtype=np.int64)
        data = np.zeros(0)
    off = sp.csr_matrix((data, (rows, cols)), shape=(n_states, n_states))
    diagonal = -np.asarray(off.sum(axis=1)).ravel()
    return (off + sp.diags(diagonal)).tocsr()


def symmetric_matrix(model: TinyModel) -> sp.csr_matrix:
    """Unit-rate exchanges to empty neighbours."""
    occ = model.occupancy
    states = np.arange(model.n_states)
    rows, cols, data = [], [], []
    for x, y, _, _ in model.bonds:
        mask = (occ[:, x] == 1) & (occ[:, y] == 0)
        rows.append(states[mask])
        cols.append(model.swap_index(x, y)[mask])
        data.append(np.ones(int(mask.sum())))
    return _assemble(rows, cols, data, model.n_states)


def asymmetric_matrix(model: TinyModel) -> sp.csr_matrix:
    """Exchange x -> x + delta e_i at (signed) rate delta lambda_i(theta_x)."""
    occ = model.occupancy
    spin = model.spin
    states = np.arange(model.n_states)
    rows, cols, data = [], [], []
    if model.drift:
        for x, y, axis, delta in model.bonds:
            if axis != 0:
                # lambda_2 = lambda sin(theta) vanishes on {0, pi}
                continue
            mask = (occ[:, x] == 1) & (occ[:, y] == 0)
            rows.append(states[mask])
            cols.append(model.swap_index(x, y)[mask])
            data.append(delta * model.drift * spin[mask, x].astype(np.float64))
    return _assemble(rows, cols, data, model.n_states)


def alignment_field(model: TinyModel, x: int) -> np.ndarray:
    """m_x = sum over the neighbours of x (with multiplicity) of eta_y cos(theta_y)."""
    spin = model.spin.astype(np.int64)
    neighbours = model.neighbors_of(x)
    if not neighbours:
        return np.zeros(model.n_states)
    return spin[:, neighbours].sum(axis=1).astype(np.float64)


def glauber_matrix(model: TinyModel) -> sp.csr_matrix:
    """Unit-rate redraw of the angle from the two-atom law; only actual flips appear."""
    states = np.arange(model.n_states)
    digits = model.digits
    rows, cols, data = [], [], []
    for x in range(model.n_sites):
        p_plus = expit(2.0 * model.beta * alignment_field(model, x))
        target = model.flip_index(x)
        for current, rate in ((PLUS, 1.0 - p_plus), (MINUS, p_plus)):
            mask = digits[:, x] == current
            rows.append(states[mask])
            cols.append(target[mask])
            data.append(rate[mask])
    return _assemble(rows, cols, data, model.n_states)


def build_generators(model: TinyModel) -> GeneratorSet:
    return GeneratorSet(
        symmetric=symmetric_matrix(model),
        asymmetric=asymmetric_matrix(model),
        glauber=glauber_matrix(model),
        model=model,
    )
