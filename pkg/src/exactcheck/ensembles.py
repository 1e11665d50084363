"""
Equivalence of canonical and grand-canonical ensembles on boxes.

E_{l,K}(f): the K angles of a canonical state placed uniformly on distinct
sites of B_l. E_{alpha_hat_K}(f): the product measure with the empirical
angle law alpha_hat_K = |B_l|^{-1} sum delta_{theta_j}. For cylinder
functions on at most two sites the canonical side is an exact
exchangeability formula; both sides can also be sampled.
"""

from dataclasses import dataclass
from typing import Callable, Dict, Optional, Sequence

import numpy as np
import pandas as pd

from src.lattice import (
    AngleMeasure,
    CanonicalState,
    Configuration,
    condition_to_canonical,
    param_distance,
    sample_grand_canonical,
)
from src.lattice.sampling import SeedLike, as_generator

Omega = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class PairFunction:
    """
    f(eta) = eta^{w1}_0 eta^{w2}_{e_1} (or eta^{w1}_0 alone when `second` is
    None), with w(theta) evaluated on angles.
    """

    name: str
    first: Omega
    second: Optional[Omega] = None

    def __call__(self, config: Configuration) -> float:
        x = 0
        value = float(config.occupancy[x]) * float(self.first(config.angle[x]))
        if self.second is not None:
            y = config.geometry.neighbor(x, 0, 1)
            value *= float(config.occupancy[y]) * float(self.second(config.angle[y]))
        return value

    def canonical(self, state: CanonicalState) -> float:
        angles = np.asarray(state.angles, dtype=np.float64)
        size = state.box_size
        w1 = np.asarray(self.first(angles), dtype=np.float64)
        if self.second is None:
            return float(w1.sum()) / size
        w2 = np.asarray(self.second(angles), dtype=np.float64)
        # ordered pairs of distinct particles on an ordered pair of distinct sites
        pairs = w1.sum() * w2.sum() - np.dot(w1, w2)
        return float(pairs) / (size * (size - 1))

    def grand_canonical(self, alpha_hat: AngleMeasure) -> float:
        value = alpha_hat.integrate(self.first)
        if self.second is not None:
            value *= alpha_hat.integrate(self.second)
        return float(value)


def _one(theta):
    return np.ones_like(np.asarray(theta, dtype=np.float64))


DENSITY = PairFunction("eta_0", _one)
PAIR = PairFunction("eta_0 eta_e1", _one, _one)
COS_PAIR = PairFunction("eta^cos_0 eta^cos_e1", np.cos, np.cos)


def canonical_mc(f: PairFunction, state: CanonicalState, replicas: int, seed: SeedLike):
    rng = as_generator(seed)
    values = np.array([f(condition_to_canonical(state, rng)) for _ in range(replicas)])
    return float(values.mean()), float(values.std(ddof=1) / np.sqrt(replicas))


def grand_canonical_mc(f: PairFunction, alpha_hat: AngleMeasure, box_side: int, replicas: int, seed: SeedLike):
    rng = as_generator(seed)
    values = np.array([f(sample_grand_canonical(alpha_hat, box_side, rng)) for _ in range(replicas)])
    return float(values.mean()), float(values.std(ddof=1) / np.sqrt(replicas))


def fixed_fraction_sampler(density: float, angle_law: Callable[[np.random.Generator, int], np.ndarray]):
    """Canonical states with K = round(density |B_l|) and angles from `angle_law`."""

    def sample(half_width: int, rng: np.random.Generator) -> CanonicalState:
        size = (2 * half_width + 1) ** 2
        k = int(round(density * size))
        return CanonicalState(half_width, tuple(np.sort(angle_law(rng, k))))

    return sample


def ensemble_equivalence_check(
    f: PairFunction,
    half_widths: Sequence[int],
    sampler: Callable[[int, np.random.Generator], CanonicalState],
    replicas: int = 0,
    draws: int = 4,
    seed: SeedLike = None,
) -> pd.DataFrame:
    """
    For each l, the largest |E_{l,K}(f) - E_{alpha_hat_K}(f)| over `draws`
    canonical states from `sampler`. With replicas > 0 both sides are also
    estimated by Monte Carlo and reported next to the exact values.
    """
    rng = as_generator(seed)
    rows = []
    for l in half_widths:
        best: Dict[str, float] = {}
        for _ in range(draws):
            state = sampler(l, rng)
            alpha_hat = state.parameter()
            exact_c = f.canonical(state)
            exact_g = f.grand_canonical(alpha_hat)
            gap = abs(exact_c - exact_g)
            if best and gap <= best["gap"]:
                continue
            best = {
                "l": l,
                "K": state.count,
                "canonical": exact_c,
                "grand_canonical": exact_g,
                "gap": gap,
            }
            if replicas:
                best["canonical_mc"], best["canonical_se"] = canonical_mc(f, state, replicas, rng)
                best["grand_canonical_mc"], best["grand_canonical_se"] = grand_canonical_mc(
                    f, alpha_hat, state.box_side, replicas, rng
                )
        rows.append(best)
    return pd.DataFrame(rows)


def decay_slope(table: pd.DataFrame) -> float:
    """Least-squares slope of log(gap) against log(l)."""
    return float(np.polyfit(np.log(table["l"]), np.log(table["gap"]), 1)[0])


def pair_gap_formula(count, box_size):
    """E_alpha_hat - E_{l,K} of eta_0 eta_e1: K (|B| - K) / (|B|^2 (|B| - 1))."""
    return count * (box_size - count) / (box_size**2 * (box_size - 1))


def pair_gap_zscores(table: pd.DataFrame) -> np.ndarray:
    """
    Distance of the sampled gap (grand-canonical minus canonical Monte Carlo
    mean) from pair_gap_formula, in joint standard errors. Needs a table
    built with replicas > 0.
    """
    if "canonical_mc" not in table:
        raise ValueError("table has no Monte Carlo columns; rerun with replicas > 0")
    measured = table["grand_canonical_mc"] - table["canonical_mc"]
    formula = pair_gap_formula(table["K"], (2 * table["l"] + 1) ** 2)
    se = np.hypot(table["canonical_se"], table["grand_canonical_se"])
    return (np.abs(measured - formula) / se).to_numpy()


# =============================================================================
# PRODUCT MEASURES
# =============================================================================


def product_expectation(alpha_hat: AngleMeasure, omegas: Sequence[Omega]) -> float:
    """E_alpha_hat of prod_j eta^{w_j}_{x_j} over distinct sites: prod_j integral w_j d alpha_hat."""
    value = 1.0
    for omega in omegas:
        value *= alpha_hat.integrate(omega)
    return float(value)


def lipschitz_ratio(omegas: Sequence[Omega], pairs: Sequence[tuple]) -> float:
    """max |E_a(f) - E_b(f)| / |||a - b||| over the given parameter pairs."""
    worst = 0.0
    for a, b in pairs:
        distance = param_distance(a, b)
        if distance <= 0:
            continue
        diff = abs(product_expectation(a, omegas) - product_expectation(b, omegas))
        worst = max(worst, diff / distance)
    return worst
