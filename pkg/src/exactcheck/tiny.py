"""
Tiny two-type tori with full state enumeration.

Site (a, b) of the n1 x n2 torus has index a * n2 + b, the same flat order
as Configuration on a square torus. A state is a base-3 number whose digit
at site s is 0 (empty), 1 (angle 0) or 2 (angle pi). Axes of width 1 carry
no bonds; on width-2 axes both directions point to the same neighbour, so
every bond appears twice, as on the simulator's torus.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import List, Tuple

import numpy as np

from src.errors import SizeBudgetError
from src.lattice import Configuration, TorusGeometry

MAX_SITES = 12
MAX_STATES = 600_000

EMPTY, PLUS, MINUS = 0, 1, 2
SPIN = np.array([0, 1, -1], dtype=np.int8)


@dataclass(frozen=True)
class TinyModel:
    """
    n1, n2: torus dimensions (axis 0 is the drift axis of the two-type model)
    drift, beta: lambda and beta
    scale: the N used in L_N = N^2 L + N L^WA + L^G (defaults to max(n1, n2))
    """

    n1: int
    n2: int
    drift: float = 0.0
    beta: float = 0.0
    scale: int = 0

    def __post_init__(self):
        if self.n1 < 1 or self.n2 < 1:
            raise SizeBudgetError(f"bad torus {self.n1}x{self.n2}")
        if self.n1 * self.n2 > MAX_SITES or 3 ** (self.n1 * self.n2) > MAX_STATES:
            raise SizeBudgetError(
                f"{self.n1}x{self.n2} torus has 3^{self.n1 * self.n2} states, over the budget"
            )

    @property
    def n_sites(self) -> int:
        return self.n1 * self.n2

    @property
    def n_states(self) -> int:
        return 3**self.n_sites

    @property
    def n(self) -> int:
        return self.scale or max(self.n1, self.n2)

    def site(self, a: int, b: int) -> int:
        return (a % self.n1) * self.n2 + (b % self.n2)

    def neighbor(self, site: int, axis: int, delta: int) -> int:
        a, b = divmod(site, self.n2)
        return self.site(a + delta, b) if axis == 0 else self.site(a, b + delta)

    @cached_property
    def bonds(self) -> List[Tuple[int, int, int, int]]:
        """Directed bonds (x, y, axis, delta) on axes of width >= 2."""
        out = []
        widths = (self.n1, self.n2)
        for x in range(self.n_sites):
            for axis in (0, 1):
                if widths[axis] < 2:
                    continue
                for delta in (1, -1):
                    out.append((x, self.neighbor(x, axis, delta), axis, delta))
        return out

    def neighbors_of(self, site: int) -> List[int]:
        """Neighbours with multiplicity, as the Glauber resultant sees them."""
        return [y for x, y, _, _ in self.bonds if x == site]

    # -------------------------------------------------------------------------
    # enumeration
    # -------------------------------------------------------------------------

    @cached_property
    def powers(self) -> np.ndarray:
        return 3 ** np.arange(self.n_sites, dtype=np.int64)

    @cached_property
    def digits(self) -> np.ndarray:
        """(n_states, n_sites) digit table."""
        index = np.arange(self.n_states, dtype=np.int64)
        return ((index[:, None] // self.powers[None, :]) % 3).astype(np.int8)

    @property
    def occupancy(self) -> np.ndarray:
        return (self.digits > 0).astype(np.int8)

    @property
    def spin(self) -> np.ndarray:
        """cos(theta) eta per site: +1, -1 or 0."""
        return SPIN[self.digits]

    def index_of(self, digits: np.ndarray) -> np.ndarray:
        return np.asarray(digits, dtype=np.int64) @ self.powers

    def swap_index(self, x: int, y: int) -> np.ndarray:
        """State index after exchanging the contents of x and y, for every state."""
        d = self.digits.astype(np.int64)
        return np.arange(self.n_states) + (d[:, y] - d[:, x]) * (self.powers[x] - self.powers[y])

    def flip_index(self, x: int) -> np.ndarray:
        """State index after switching the angle at x (unchanged where x is empty)."""
        d = self.digits[:, x].astype(np.int64)
        change = np.where(d == PLUS, 1, np.where(d == MINUS, -1, 0))
        return np.arange(self.n_states) + change * self.powers[x]

    # -------------------------------------------------------------------------
    # measures
    # -------------------------------------------------------------------------

    def product_weights(self, plus: float, minus: float) -> np.ndarray:
        """mu_alpha_hat with atoms alpha+ at 0 and alpha- at pi, same on every site."""
        probs = np.array([1.0 - plus - minus, plus, minus])
        return np.prod(probs[self.digits], axis=1)

    def reference_weights(self, alpha: float) -> np.ndarray:
        """mu*_alpha: density alpha, angles uniform on {0, pi}."""
        return self.product_weights(alpha / 2.0, alpha / 2.0)

    # -------------------------------------------------------------------------
    # conversion
    # -------------------------------------------------------------------------

    def configuration(self, index: int) -> Configuration:
        """The state as a Configuration (square tori only)."""
        if self.n1 != self.n2:
            raise SizeBudgetError("Configuration needs a square torus")
        d = self.digits[index]
        angle = np.where(d == MINUS, np.pi, 0.0)
        return Configuration.from_arrays(TorusGeometry(self.n1), (d > 0).astype(np.uint8), angle)

    def index_of_configuration(self, config: Configuration) -> int:
        d = np.where(config.occupancy == 1, np.where(config.angle == 0.0, PLUS, MINUS), EMPTY)
        return int(self.index_of(d))
