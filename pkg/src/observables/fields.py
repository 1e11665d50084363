"""
Mollified empirical fields.

Exported snapshots use disjoint cells: each axis of the N-torus is split
into L contiguous blocks of near-equal length (L = N // (2 eps N + 1) by
default). Per cell we store the angle histogram divided by the cell's site
count, its bin sum (the mass) and the block average of eta (cos, sin).
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, Optional

import numpy as np
from scipy import ndimage

from src.errors import GridMismatchError
from src.lattice import Configuration, angle_bin, bin_edges, direction


def box_half_width(side: int, eps: float) -> int:
    half = int(round(eps * side))
    if not 1 <= half <= side / 2:
        raise GridMismatchError(f"eps*N = {eps * side:g} outside [1, N/2] for N={side}")
    return half


def default_cells(side: int, eps: float) -> int:
    return max(1, side // (2 * box_half_width(side, eps) + 1))


def cell_labels(side: int, cells: int) -> np.ndarray:
    """Cell index along one axis for each of the `side` coordinates."""
    if not 1 <= cells <= side:
        raise GridMismatchError(f"cannot split {side} sites into {cells} cells")
    return np.arange(side) * cells // side


@dataclass
class FieldSnapshot:
    time: float
    eps: float
    side: int
    histogram: np.ndarray
    magnetization: np.ndarray
    cell_sites: np.ndarray
    mass: np.ndarray = field(init=False)

    def __post_init__(self):
        # mass is the bin sum, so marginalizing the histogram reproduces it bitwise
        self.mass = self.histogram.sum(axis=-1)

    @property
    def cells(self) -> int:
        return self.histogram.shape[0]

    @property
    def n_bins(self) -> int:
        return self.histogram.shape[-1]

    @property
    def bin_edges(self) -> np.ndarray:
        return bin_edges(self.n_bins)

    def metadata(self) -> Dict[str, Any]:
        return {
            "time": self.time,
            "eps": self.eps,
            "N": self.side,
            "cells": self.cells,
            "bins": self.n_bins,
            "bin_edges": self.bin_edges.tolist(),
        }

    def records(self) -> Iterator[Dict[str, Any]]:
        """One NDJSON record per cell."""
        for i in range(self.cells):
            for j in range(self.cells):
                yield {
                    "time": self.time,
                    "i": i,
                    "j": j,
                    "mass": float(self.mass[i, j]),
                    "histogram": self.histogram[i, j].tolist(),
                    "magnetization": self.magnetization[i, j].tolist(),
                }


def _cell_ids(config: Configuration, cells: int):
    labels = cell_labels(config.side, cells)
    ids = (labels[:, None] * cells + labels[None, :]).ravel()
    sizes = np.bincount(ids, minlength=cells * cells).reshape(cells, cells)
    return ids, sizes


def mollified_density(
    config: Configuration,
    eps: float,
    n_bins: int,
    time: float = 0.0,
    cells: Optional[int] = None,
) -> FieldSnapshot:
    if cells is None:
        cells = default_cells(config.side, eps)
    ids, sizes = _cell_ids(config, cells)
    occupied = config.particles
    bins = angle_bin(config.angle[occupied], n_bins)
    counts = np.bincount(ids[occupied] * n_bins + bins, minlength=cells * cells * n_bins)
    histogram = counts.reshape(cells, cells, n_bins) / sizes[..., None]
    return FieldSnapshot(
        time=float(time),
        eps=eps,
        side=config.side,
        histogram=histogram,
        magnetization=_magnetization(config, ids, sizes, cells),
        cell_sites=sizes,
    )


def _magnetization(config: Configuration, ids, sizes, cells: int) -> np.ndarray:
    occupied = config.particles
    c, s = direction(config.angle[occupied])
    out = np.empty((cells, cells, 2))
    for k, comp in enumerate((c, s)):
        total = np.bincount(ids[occupied], weights=comp, minlength=cells * cells)
        out[..., k] = total.reshape(cells, cells) / sizes
    return out


def magnetization_field(config: Configuration, eps: float, cells: Optional[int] = None) -> np.ndarray:
    """(L, L, 2) block averages of eta_x (cos theta_x, sin theta_x)."""
    if cells is None:
        cells = default_cells(config.side, eps)
    ids, sizes = _cell_ids(config, cells)
    return _magnetization(config, ids, sizes, cells)


def block_average(values: np.ndarray, half_width: int) -> np.ndarray:
    """Sliding-window average <phi>^l_x over B_l(x) on the torus, for every x."""
    return ndimage.uniform_filter(
        np.asarray(values, dtype=np.float64), size=2 * half_width + 1, mode="wrap"
    )
