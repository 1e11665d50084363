"""
Spectral gap of the angle-blind exclusion process on the closed box B_n.

The box has side 2n+1, no wraparound; the K-particle sector is enumerated
as bitmasks. For the SSEP the gap of every sector equals the single-particle
gap 2 - 2 cos(pi / (2n+1)), which the tests use as the oracle.
"""

import itertools
import math

import numpy as np
import scipy.sparse as sp
from scipy.linalg import eigh
from scipy.sparse.linalg import eigsh

from src.errors import SizeBudgetError

MAX_SECTOR = 200_000
DENSE_LIMIT = 2_000

# frozen bracket for gap * n^2 over the tested (n, K)
GAP_BRACKET = (0.9, 1.6)


def box_edges(n: int):
    """Undirected nearest-neighbour edges (a, b) of the closed (2n+1)^2 box."""
    side = 2 * n + 1
    edges = []
    for r in range(side):
        for c in range(side):
            s = r * side + c
            if c + 1 < side:
                edges.append((s, s + 1))
            if r + 1 < side:
                edges.append((s, s + side))
    return edges


def sector_generator(n: int, k: int) -> sp.csr_matrix:
    """Generator of the K-particle SSEP on B_n (unit rate per licit jump)."""
    side = 2 * n + 1
    sites = side * side
    if not 0 < k < sites:
        raise SizeBudgetError(f"need 0 < K < {sites}, got {k}")
    size = math.comb(sites, k)
    if size > MAX_SECTOR:
        raise SizeBudgetError(f"sector C({sites},{k}) = {size} exceeds {MAX_SECTOR}")

    masks = [sum(1 << s for s in combo) for combo in itertools.combinations(range(sites), k)]
    index = {m: i for i, m in enumerate(masks)}
    rows, cols = [], []
    for i, m in enumerate(masks):
        for a, b in box_edges(n):
            if ((m >> a) & 1) != ((m >> b) & 1):
                rows.append(i)
                cols.append(index[m ^ (1 << a) ^ (1 << b)])
    off = sp.csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(size, size))
    return (off - sp.diags(np.asarray(off.sum(axis=1)).ravel())).tocsr()


def spectral_gap_blind(n: int, k: int) -> float:
    """Second-smallest eigenvalue of -L_n on the K-particle sector."""
    neg = -sector_generator(n, k)
    size = neg.shape[0]
    if size == 1:
        return 0.0
    if size <= DENSE_LIMIT:
        values = eigh(neg.toarray(), eigvals_only=True)
    else:
        values = np.sort(eigsh(neg, k=2, sigma=-1e-3, which="LM", return_eigenvectors=False))
    return float(np.sort(values)[1])


def single_particle_gap(n: int) -> float:
    return 2.0 - 2.0 * math.cos(math.pi / (2 * n + 1))


def grid_laplacian_gap(n: int) -> float:
    """Gap of the graph Laplacian of the (2n+1)^2 grid, by dense eigensolve."""
    side = 2 * n + 1
    lap = np.zeros((side * side, side * side))
    for a, b in box_edges(n):
        lap[a, b] = lap[b, a] = -1.0
        lap[a, a] += 1.0
        lap[b, b] += 1.0
    return float(np.sort(np.linalg.eigvalsh(lap))[1])
