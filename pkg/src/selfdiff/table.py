"""
Tabulated self-diffusion coefficient with a monotone C^1 interpolant.

Raw estimates are projected onto nonincreasing sequences (weighted isotonic
regression), the endpoints are pinned to d_s(0) = 1 and d_s(1) = 0, and the
result is interpolated with PCHIP, which keeps monotone data monotone and
inside [0, 1]. d_s' is the interpolant's analytic derivative.
"""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, Union

import numpy as np
import pandas as pd
from scipy.interpolate import PchipInterpolator
from scipy.optimize import isotonic_regression

from src.errors import TableNotBuiltError
from src.lattice.sampling import SeedLike, as_generator

from .estimate import DsEstimate, estimate_ds

logger = logging.getLogger(__name__)

NORMALIZATION = "E[X_1(T)^2] / (2 N^2 T)"
DEFAULT_GRID = (0.0, 0.25, 0.5, 0.75, 1.0)


@dataclass
class DsTable:
    grid: Optional[np.ndarray] = None
    estimates: Optional[np.ndarray] = None
    stderr: Optional[np.ndarray] = None
    fitted: Optional[np.ndarray] = None
    budget: Dict[str, Any] = field(default_factory=dict)
    source: str = "estimated"
    _interpolant: Optional[PchipInterpolator] = field(default=None, repr=False)

    # -------------------------------------------------------------------------
    # construction
    # -------------------------------------------------------------------------

    @classmethod
    def from_estimates(
        cls,
        grid: Sequence[float],
        estimates: Sequence[float],
        stderr: Optional[Sequence[float]] = None,
        budget: Optional[Dict[str, Any]] = None,
        source: str = "estimated",
    ) -> "DsTable":
        grid = np.asarray(grid, dtype=np.float64)
        order = np.argsort(grid)
        grid = grid[order]
        estimates = np.asarray(estimates, dtype=np.float64)[order]
        stderr = (
            np.zeros_like(estimates) if stderr is None else np.asarray(stderr, dtype=np.float64)[order]
        )
        if grid[0] != 0.0 or grid[-1] != 1.0:
            raise ValueError("d_s grid must contain 0 and 1")
        if np.any(np.diff(grid) <= 0):
            raise ValueError("d_s grid has repeated densities")

        # inverse-variance weights; exact (zero-error) points get a large finite weight
        weights = 1.0 / np.maximum(stderr, 1e-6) ** 2
        fitted = isotonic_regression(estimates, weights=weights, increasing=False).x
        fitted = np.clip(fitted, 0.0, 1.0)
        fitted[0], fitted[-1] = 1.0, 0.0
        fitted = np.minimum.accumulate(fitted)

        table = cls(
            grid=grid,
            estimates=estimates,
            stderr=stderr,
            fitted=fitted,
            budget=dict(budget or {}),
            source=source,
        )
        table._interpolant = PchipInterpolator(grid, fitted)
        return table

    @classmethod
    def mean_field(cls) -> "DsTable":
        """Closure d_s(rho) = 1 - rho, for runs without an estimated table."""
        logger.warning("no d_s table configured; using the mean-field closure d_s = 1 - rho")
        return cls.from_estimates([0.0, 1.0], [1.0, 0.0], source="mean-field")

    @property
    def built(self) -> bool:
        return self._interpolant is not None

    def _require(self) -> PchipInterpolator:
        if self._interpolant is None:
            raise TableNotBuiltError("d_s table queried before it was built or loaded")
        return self._interpolant

    # -------------------------------------------------------------------------
    # lookups
    # -------------------------------------------------------------------------

    def ds(self, rho):
        values = self._require()(np.clip(rho, 0.0, 1.0))
        return np.clip(values, 0.0, 1.0) if np.ndim(values) else float(np.clip(values, 0.0, 1.0))

    def ds_prime(self, rho):
        values = self._require()(np.clip(rho, 0.0, 1.0), 1)
        return values if np.ndim(values) else float(values)

    def ratio_constant(self) -> float:
        """Smallest C with (1/C)(1-rho) <= d_s(rho) <= C(1-rho) on the grid (rho < 1)."""
        self._require()
        inner = self.grid < 1.0
        ratio = self.fitted[inner] / (1.0 - self.grid[inner])
        if np.any(ratio <= 0):
            return float("inf")
        return float(np.max(np.maximum(ratio, 1.0 / ratio)))

    # -------------------------------------------------------------------------
    # persistence
    # -------------------------------------------------------------------------

    def to_frame(self) -> pd.DataFrame:
        self._require()
        return pd.DataFrame(
            {
                "rho": self.grid,
                "estimate": self.estimates,
                "stderr": self.stderr,
                "fitted": self.fitted,
            }
        )

    def save(self, path: Union[str, Path]) -> Path:
        """Write `<path>` (CSV) and `<path>.json` (normalization and budget)."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, index=False)
        sidecar = {"normalization": NORMALIZATION, "source": self.source, "budget": self.budget}
        path.with_suffix(path.suffix + ".json").write_text(json.dumps(sidecar, indent=2))
        return path

    @classmethod
    def load(cls, path: Union[str, Path]) -> "DsTable":
        path = Path(path)
        frame = pd.read_csv(path)
        sidecar_path = path.with_suffix(path.suffix + ".json")
        sidecar = json.loads(sidecar_path.read_text()) if sidecar_path.exists() else {}
        return cls.from_estimates(
            frame["rho"].to_numpy(),
            frame["estimate"].to_numpy(),
            frame["stderr"].to_numpy(),
            budget=sidecar.get("budget"),
            source=sidecar.get("source", "estimated"),
        )


def build_ds_table(
    grid: Sequence[float] = DEFAULT_GRID,
    side: int = 64,
    horizon: float = 0.05,
    replicas: int = 200,
    seed: SeedLike = None,
    workers: Optional[int] = None,
) -> tuple[DsTable, list[DsEstimate]]:
    """Estimate d_s on every grid density and return the fitted table."""
    grid = sorted(float(r) for r in grid)
    if 0.0 not in grid or 1.0 not in grid:
        raise ValueError("d_s grid must contain 0 and 1")
    streams = as_generator(seed).spawn(len(grid))
    results = []
    for rho, rng in zip(grid, streams):
        result = estimate_ds(rho, side, horizon, replicas, seed=rng, workers=workers)
        logger.info("[SELFDIFF] rho=%.3f d_s=%.4f +- %.4f", rho, result.estimate, result.stderr)
        results.append(result)
    budget = {"N": side, "T": horizon, "replicas": replicas}
    table = DsTable.from_estimates(
        grid,
        [r.estimate for r in results],
        [r.stderr for r in results],
        budget=budget,
    )
    return table, results
