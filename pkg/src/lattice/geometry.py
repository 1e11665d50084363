"""
Discrete torus of side N.

Sites are flat indices x1 * N + x2, matching C-order ravel of (N, N) arrays
indexed [x1, x2]. Direction order used everywhere: +e1, -e1, +e2, -e2.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Tuple

import numpy as np

from src.errors import LatticeError

# (axis, delta) for the four nearest-neighbour moves
DIRECTIONS: Tuple[Tuple[int, int], ...] = ((0, 1), (0, -1), (1, 1), (1, -1))


@dataclass(frozen=True)
class TorusGeometry:
    """The N x N periodic lattice."""

    side: int

    def __post_init__(self):
        if self.side < 1:
            raise LatticeError(f"torus side must be positive, got {self.side}")

    @property
    def n_sites(self) -> int:
        return self.side * self.side

    def site(self, x1: int, x2: int) -> int:
        """Flat index of (x1, x2), coordinates taken modulo N."""
        n = self.side
        return (x1 % n) * n + (x2 % n)

    def coords(self, site: int) -> Tuple[int, int]:
        self.check_site(site)
        return divmod(int(site), self.side)

    def check_site(self, site: int):
        if not 0 <= site < self.n_sites:
            raise LatticeError(f"site {site} outside torus of {self.n_sites} sites")

    def neighbor(self, site: int, axis: int, delta: int) -> int:
        """Site reached from `site` by delta * e_axis, with wraparound."""
        x1, x2 = self.coords(site)
        if axis == 0:
            return self.site(x1 + delta, x2)
        return self.site(x1, x2 + delta)

    def shift(self, site: int, x1: int, x2: int) -> int:
        """Site + (x1, x2) on the torus (the group law used by translations)."""
        a, b = self.coords(site)
        return self.site(a + x1, b + x2)

    @cached_property
    def neighbor_table(self) -> np.ndarray:
        """(n_sites, 4) int64 table of neighbours in DIRECTIONS order."""
        idx = np.arange(self.n_sites).reshape(self.side, self.side)
        table = np.empty((self.n_sites, 4), dtype=np.int64)
        for k, (axis, delta) in enumerate(DIRECTIONS):
            # roll by -delta puts the value at x+delta in position x
            table[:, k] = np.roll(idx, -delta, axis=axis).ravel()
        return table

    def box_sites(self, center: int, half_width: int) -> np.ndarray:
        """Flat sites of B_l(center) = center + {-l..l}^2, wrapped."""
        if half_width < 0 or 2 * half_width + 1 > self.side:
            raise LatticeError(
                f"box of half-width {half_width} does not fit in a torus of side {self.side}"
            )
        a, b = self.coords(center)
        offsets = np.arange(-half_width, half_width + 1)
        rows = (a + offsets) % self.side
        cols = (b + offsets) % self.side
        return (rows[:, None] * self.side + cols[None, :]).ravel()
