"""
Verdict records and the default exact-check suite.
"""

import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from src.dynamics import ModelParams
from src.hydro import TestFunction, martingale_variance_slope, sample_martingale
from src.lattice import AngleMeasure, CanonicalState, InitialProfile, condition_to_canonical
from src.lattice.sampling import SeedLike, as_generator

from .checks import (
    adjoint_check,
    current_identity_defect,
    dirichlet_form,
    dirichlet_form_gradients,
    glauber_two_state_check,
    row_sum_defect,
    sectors_match_multisets,
    self_adjoint_defect,
    stationarity_check,
)
from .ensembles import (
    COS_PAIR,
    DENSITY,
    PAIR,
    decay_slope,
    ensemble_equivalence_check,
    fixed_fraction_sampler,
    lipschitz_ratio,
    pair_gap_zscores,
)
from .generators import build_generators
from .irreducibility import bfs_distance, irreducibility_path, length_bound, replay_path
from .spectral import GAP_BRACKET, grid_laplacian_gap, spectral_gap_blind
from .tiny import TinyModel

logger = logging.getLogger(__name__)

EXACT_TOLERANCE = 1e-12
CONTROL_THRESHOLD = 1e-8
DEFAULT_PAIRS = 1000
ENSEMBLE_HALF_WIDTHS = (2, 4, 8, 16)
ENSEMBLE_REPLICAS = 2000
MARTINGALE_SIDES = (16, 32, 64)
MARTINGALE_HORIZON = 0.02


@dataclass
class Verdict:
    name: str
    defect: float
    tolerance: float
    passed: bool
    # "max": pass if defect <= tolerance; "min": pass if defect > tolerance (negative controls)
    kind: str = "max"
    details: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def upper(cls, name: str, defect: float, tolerance: float = EXACT_TOLERANCE, **details) -> "Verdict":
        defect = float(defect)
        return cls(name, defect, tolerance, bool(defect <= tolerance), "max", details)

    @classmethod
    def lower(cls, name: str, value: float, threshold: float = CONTROL_THRESHOLD, **details) -> "Verdict":
        value = float(value)
        return cls(name, value, threshold, bool(value > threshold), "min", details)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Verdict":
        return cls(**{k: v for k, v in data.items() if k in cls.__dataclass_fields__})


# =============================================================================
# SUITE
# =============================================================================


def _generator_verdicts(rng: np.random.Generator) -> List[Verdict]:
    out = []
    models = {
        "1x2": TinyModel(1, 2),
        "2x2": TinyModel(2, 2, drift=1.0, beta=0.5),
        "3x2": TinyModel(3, 2, drift=1.0, beta=0.5),
        "5x1": TinyModel(5, 1, drift=1.0, beta=0.5),
    }
    for label, model in models.items():
        gens = build_generators(model)
        worst = max(
            row_sum_defect(gens.symmetric),
            row_sum_defect(gens.asymmetric),
            row_sum_defect(gens.glauber),
            row_sum_defect(gens.full()),
        )
        out.append(Verdict.upper(f"row_sums[{label}]", worst))

        plus, minus = rng.uniform(0.05, 0.45, size=2)
        weights = model.product_weights(plus, minus)
        out.append(Verdict.upper(f"self_adjoint[{label}]", self_adjoint_defect(gens.symmetric, weights)))
        out.append(Verdict.upper(f"current_sym[{label}]", current_identity_defect(model, gens)))
        out.append(
            Verdict.upper(f"current_asym[{label}]", current_identity_defect(model, gens, asymmetric=True))
        )
        alphas = rng.uniform(0.05, 0.95, size=5)
        out.append(
            Verdict.upper(
                f"adjoint[{label}]",
                max(adjoint_check(model, a, gens) for a in alphas),
                alphas=alphas.tolist(),
            )
        )
        h = rng.standard_normal(model.n_states)
        form = dirichlet_form(model, h, weights, gens)
        direct = dirichlet_form_gradients(model, h, weights)
        out.append(Verdict.upper(f"dirichlet_two_paths[{label}]", abs(form - direct), value=form))

    for label, model in (("2x2", TinyModel(2, 2)), ("3x2", TinyModel(3, 2)), ("5x1", TinyModel(5, 1))):
        out.append(Verdict.upper(f"stationarity[{label}]", stationarity_check(model, 0.5)))
    out.append(Verdict.lower("stationarity_drift_control[3x2]", stationarity_check(TinyModel(3, 2, drift=1.0), 0.5)))
    out.append(Verdict.lower("stationarity_glauber_control[2x2]", stationarity_check(TinyModel(2, 2, beta=1.0), 0.5)))

    out.append(Verdict.upper("sectors[2x2]", 0.0 if sectors_match_multisets(TinyModel(2, 2)) else 1.0, tolerance=0.0))
    for beta, m in ((0.0, 0.0), (0.5, 2.0), (2.0, -3.0)):
        out.append(Verdict.upper(f"glauber_two_state[beta={beta},m={m}]", glauber_two_state_check(beta, m)))
    return out


def _spectral_verdicts() -> List[Verdict]:
    out = [Verdict.upper("gap_single_particle[n=1]", abs(spectral_gap_blind(1, 1) - grid_laplacian_gap(1)))]
    for k in range(1, 5):
        out.append(
            Verdict.upper(
                f"gap_particle_hole[n=1,K={k}]",
                abs(spectral_gap_blind(1, k) - spectral_gap_blind(1, 9 - k)),
                tolerance=1e-10,
            )
        )
    low, high = GAP_BRACKET
    for n, k in ((1, 1), (1, 4), (2, 2)):
        scaled = spectral_gap_blind(n, k) * n * n
        # distance outside the bracket
        defect = max(0.0, low - scaled, scaled - high)
        out.append(Verdict.upper(f"gap_bracket[n={n},K={k}]", defect, tolerance=0.0, scaled_gap=scaled))
    return out


def random_box_pair(p: int, holes: int, rng: np.random.Generator, angles=(0.0, math.pi)):
    """Two configurations of B_p with the same random angle multiset and `holes` holes."""
    side = 2 * p + 1
    k = side * side - holes
    state = CanonicalState(p, tuple(rng.choice(angles, size=k)))
    return condition_to_canonical(state, rng), condition_to_canonical(state, rng)


def _irreducibility_verdicts(rng: np.random.Generator, pairs: int) -> List[Verdict]:
    out = []
    for p in (1, 2):
        invalid, longest, unconfirmed = 0, 0, 0
        for _ in range(pairs):
            holes = int(rng.integers(2, (2 * p + 1) ** 2 // 2 + 1))
            a, b = random_box_pair(p, holes, rng)
            jumps = irreducibility_path(a, b, p)
            if not replay_path(a, jumps).same_state(b):
                invalid += 1
            longest = max(longest, len(jumps))
            # B_1 is small enough to search exhaustively
            if p == 1:
                geodesic = bfs_distance(a, b)
                if geodesic < 0 or geodesic > len(jumps):
                    unconfirmed += 1
        out.append(Verdict.upper(f"irreducibility_valid[p={p}]", invalid, tolerance=0.0, pairs=pairs))
        out.append(
            Verdict.upper(
                f"irreducibility_length[p={p}]",
                longest,
                tolerance=length_bound(p),
                longest=longest,
            )
        )
        if p == 1:
            out.append(Verdict.upper("irreducibility_vs_bfs[p=1]", unconfirmed, tolerance=0.0, pairs=pairs))
    return out


def _ensemble_verdicts(rng: np.random.Generator) -> List[Verdict]:
    def uniform_two_type(g: np.random.Generator, k: int):
        return g.choice([0.0, math.pi], size=k)

    sampler = fixed_fraction_sampler(0.4, uniform_two_type)
    out = []
    density = ensemble_equivalence_check(DENSITY, [1, 2, 4], sampler, seed=rng)
    out.append(Verdict.upper("ensemble_density_gap", float(density["gap"].max())))

    pair = ensemble_equivalence_check(PAIR, ENSEMBLE_HALF_WIDTHS, sampler, replicas=ENSEMBLE_REPLICAS, seed=rng)
    z = pair_gap_zscores(pair)
    out.append(Verdict.upper("ensemble_pair_sampled", float(z.max()), tolerance=4.0, zscores=z.tolist()))
    slope = decay_slope(pair)
    out.append(Verdict.upper("ensemble_pair_slope", abs(slope + 2.0), tolerance=0.3, slope=slope))

    cos_pair = ensemble_equivalence_check(COS_PAIR, ENSEMBLE_HALF_WIDTHS, sampler, seed=rng)
    gaps = cos_pair["gap"].to_numpy()
    out.append(Verdict.upper("ensemble_cos_pair_decreasing", float(np.sum(np.diff(gaps) >= 0)), tolerance=0.0))

    measures = [AngleMeasure.atomic(rng.uniform(0, 2 * math.pi, 3), rng.uniform(0, 0.3, 3)) for _ in range(6)]
    ratio = lipschitz_ratio([np.cos, np.sin], list(zip(measures[:3], measures[3:])))
    out.append(Verdict.upper("product_lipschitz", max(0.0, ratio - 2.0), tolerance=0.0, ratio=ratio))
    return out


def _martingale_verdicts(rng: np.random.Generator, replicas: int, sides: Sequence[int]) -> List[Verdict]:
    H = TestFunction.plane_wave(1, 1)
    samples = [
        sample_martingale(
            ModelParams(side=n, drift=1.0, beta=0.5, horizon=MARTINGALE_HORIZON),
            InitialProfile.constant(0.4),
            H,
            replicas,
            seed=rng,
        )
        for n in sides
    ]
    slope = martingale_variance_slope(samples)
    variances = [s.variance for s in samples]
    return [
        Verdict.upper(
            "martingale_variance_slope", abs(slope + 2.0), tolerance=0.5, slope=slope, variances=variances
        )
    ]


def default_suite(
    seed: SeedLike = 0,
    irreducibility_pairs: int = DEFAULT_PAIRS,
    martingale_replicas: int = 0,
    martingale_sides: Sequence[int] = MARTINGALE_SIDES,
) -> List[Verdict]:
    """
    Every exact check at its default size; all verdicts pass on a correct
    build. The martingale block simulates full lattices and runs only when
    martingale_replicas > 0.
    """
    rng = as_generator(seed)
    verdicts: List[Verdict] = []
    blocks = [
        ("generators", lambda: _generator_verdicts(rng)),
        ("spectral", _spectral_verdicts),
        ("irreducibility", lambda: _irreducibility_verdicts(rng, irreducibility_pairs)),
        ("ensembles", lambda: _ensemble_verdicts(rng)),
    ]
    if martingale_replicas:
        blocks.append(("martingale", lambda: _martingale_verdicts(rng, martingale_replicas, martingale_sides)))
    for name, block in blocks:
        results = block()
        failed = [v.name for v in results if not v.passed]
        logger.info("%s: %d checks, %d failed %s", name, len(results), len(failed), failed or "")
        verdicts.extend(results)
    return verdicts


def summarize(verdicts: List[Verdict]) -> Optional[str]:
    """None when every verdict passed, else the comma-separated failures."""
    failed = [v.name for v in verdicts if not v.passed]
    return ", ".join(failed) if failed else None
