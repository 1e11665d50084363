"""
Run configuration.

Behavior is controlled by:
- config/default.yaml  → bundled defaults for every job
- a user YAML file      → same sections, any subset of keys

Only the root seed may come from the environment (AEP_SEED).
"""

import dataclasses
import os
import zlib
from pathlib import Path
from typing import List, Literal, Optional, Union

import numpy as np
import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from src.dynamics import DEFAULT_EVENT_BUDGET, ModelParams
from src.errors import ConfigError, ProfileError
from src.hydro import PdeConfig, stable_dt
from src.observables import box_half_width, default_cells
from src.selfdiff import DEFAULT_GRID

from .profiles import PRESETS, build_profile

DEFAULT_CONFIG = Path(__file__).parent / "default.yaml"
SEED_ENV = "AEP_SEED"


# ============================================================================
# SECTIONS
# ============================================================================


class Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ModelSection(Section):
    side: int = Field(32, ge=2)
    drift: float = Field(0.0, ge=0.0)
    beta: float = Field(0.0, ge=0.0)
    horizon: float = Field(0.5, ge=0.0)
    seed: int = Field(0, ge=0)
    replicas: int = Field(1, ge=1)
    workers: Optional[int] = Field(None, ge=1)
    two_type: bool = False
    max_events: int = Field(DEFAULT_EVENT_BUDGET, ge=0)


class ProfileSection(Section):
    preset: Literal["constant", "cosine", "heat", "two_type_bump", "aligned_cosine", "table"] = "constant"
    density: Optional[float] = Field(None, ge=0.0, lt=1.0)
    amplitude: Optional[float] = Field(None, ge=0.0)
    kappa: float = Field(2.0, ge=0.0)
    table: Optional[str] = None


class ObservationSection(Section):
    times: List[float] = Field(default_factory=lambda: [0.0, 0.25, 0.5])
    eps: float = Field(0.125, gt=0.0, le=0.5)
    bins: int = Field(8, ge=1)
    cells: Optional[int] = Field(None, ge=1)
    cluster_sizes: List[int] = Field(default_factory=lambda: [1, 2, 3])
    snapshots: bool = True


class PdeSection(Section):
    cells: int = Field(32, ge=3)
    bins: int = Field(8, ge=1)
    dt: Optional[float] = Field(None, gt=0.0)
    cfl: float = Field(0.25, gt=0.0, le=1.0)
    scheme: Literal["euler", "heun"] = "euler"
    limiter: bool = False
    reaction: bool = True
    gamma_samples: int = Field(256, ge=1)
    residual_slices: int = Field(201, ge=2)
    residual_tolerance: float = Field(1e-3, gt=0.0)


class SelfdiffSection(Section):
    grid: List[float] = Field(default_factory=lambda: list(DEFAULT_GRID))
    side: int = Field(64, ge=2)
    horizon: float = Field(0.05, gt=0.0)
    replicas: int = Field(200, ge=2)


class CompareSection(Section):
    sides: List[int] = Field(default_factory=lambda: [32, 64, 96])
    noise_floor: bool = True
    noise_floor_factor: float = Field(3.0, gt=0.0)
    max_ratio: float = Field(0.6, gt=0.0)


class ExactcheckSection(Section):
    irreducibility_pairs: int = Field(1000, ge=1)
    # 0 skips the simulated martingale-variance check
    martingale_replicas: int = Field(200, ge=0)
    martingale_sides: List[int] = Field(default_factory=lambda: [16, 32, 64])


class PathsSection(Section):
    output: str = "runs/latest"
    ds_table: Optional[str] = None


# ============================================================================
# RUN CONFIG
# ============================================================================


class RunConfig(Section):
    model: ModelSection = Field(default_factory=ModelSection)
    profile: ProfileSection = Field(default_factory=ProfileSection)
    observation: ObservationSection = Field(default_factory=ObservationSection)
    pde: PdeSection = Field(default_factory=PdeSection)
    selfdiff: SelfdiffSection = Field(default_factory=SelfdiffSection)
    compare: CompareSection = Field(default_factory=CompareSection)
    exactcheck: ExactcheckSection = Field(default_factory=ExactcheckSection)
    paths: PathsSection = Field(default_factory=PathsSection)

    @classmethod
    def from_dict(cls, data: Optional[dict]) -> "RunConfig":
        """Validate a nested dict; every problem is reported as a dotted key."""
        try:
            config = cls.model_validate(data or {})
        except ValidationError as e:
            issues = [(".".join(str(part) for part in err["loc"]), err["msg"]) for err in e.errors()]
            raise ConfigError("invalid configuration", issues) from e
        config.check()
        return config

    @classmethod
    def load(cls, config_path: Optional[Union[str, Path]] = None) -> "RunConfig":
        """
        Load the bundled defaults, then overlay `config_path` if given.
        AEP_SEED, when set, replaces model.seed.
        """
        with open(DEFAULT_CONFIG) as f:
            data = yaml.safe_load(f) or {}
        if config_path is not None:
            path = Path(config_path)
            if not path.exists():
                raise ConfigError(f"config file not found: {path}", [("path", str(path))])
            with open(path) as f:
                override = yaml.safe_load(f) or {}
            if not isinstance(override, dict):
                raise ConfigError(f"config file {path} must hold a mapping")
            data = merge(data, override)

        seed = os.environ.get(SEED_ENV)
        if seed is not None:
            try:
                data.setdefault("model", {})["seed"] = int(seed)
            except ValueError:
                raise ConfigError("invalid seed override", [(SEED_ENV, f"not an integer: {seed!r}")])
        return cls.from_dict(data)

    def updated(self, **sections) -> "RunConfig":
        """Copy with some keys replaced, e.g. updated(model={"side": 64}); re-validated."""
        return RunConfig.from_dict(merge(self.model_dump(), sections))

    # -------------------------------------------------------------------------
    # cross-field checks
    # -------------------------------------------------------------------------

    def check(self):
        issues = []
        model, obs = self.model, self.observation
        if model.drift > model.side:
            issues.append(("model.drift", f"lambda={model.drift} exceeds N={model.side}"))
        if model.drift > min(self.compare.sides, default=model.side):
            issues.append(("compare.sides", f"lambda={model.drift} exceeds the smallest compared N"))

        times = obs.times
        if not times:
            issues.append(("observation.times", "at least one observation time is required"))
        elif list(times) != sorted(times):
            issues.append(("observation.times", "must be sorted"))
        elif times[0] < 0 or times[-1] > model.horizon + 1e-12:
            issues.append(("observation.times", f"must lie in [0, {model.horizon}]"))
        if any(p < 1 for p in obs.cluster_sizes):
            issues.append(("observation.cluster_sizes", "box half-widths must be >= 1"))

        for side in [model.side, *self.compare.sides]:
            try:
                box_half_width(side, obs.eps)
            except ValueError as e:
                issues.append(("observation.eps", str(e)))
                break
        if obs.cells is not None:
            if any(obs.cells > side for side in [model.side, *self.compare.sides]):
                issues.append(("observation.cells", "more cells than lattice sites"))
            if self.pde.cells % obs.cells:
                issues.append(("pde.cells", f"{self.pde.cells} is not a multiple of observation.cells={obs.cells}"))
        if obs.bins != self.pde.bins:
            issues.append(("pde.bins", f"angle bins differ: observation {obs.bins}, pde {self.pde.bins}"))
        if model.two_type and self.pde.bins != 2:
            issues.append(("pde.bins", "two-type runs use exactly 2 angle bins"))

        check = self.exactcheck
        if check.martingale_replicas and (len(set(check.martingale_sides)) < 2 or min(check.martingale_sides) < 4):
            issues.append(("exactcheck.martingale_sides", "need at least two distinct sides, each >= 4"))
        if check.martingale_replicas == 1:
            issues.append(("exactcheck.martingale_replicas", "0 to skip, else at least 2"))

        grid = self.selfdiff.grid
        if 0.0 not in grid or 1.0 not in grid or any(not 0.0 <= r <= 1.0 for r in grid):
            issues.append(("selfdiff.grid", "densities in [0, 1] including both endpoints"))

        if self.profile.preset == "table" and not self.profile.table:
            issues.append(("profile.table", "the table preset needs a path to an (L, L, M) .npy file"))
        elif model.two_type and self.profile.preset in ("aligned_cosine", "table"):
            issues.append(("profile.preset", f"'{self.profile.preset}' has continuous angles; not usable with two_type"))
        else:
            try:
                build_profile(self.profile, model.two_type).check(side=model.side)
            except (ProfileError, OSError) as e:
                issues.append(("profile", str(e)))
        if issues:
            raise ConfigError("invalid configuration", issues)

    # -------------------------------------------------------------------------
    # conversions
    # -------------------------------------------------------------------------

    def initial_profile(self):
        return build_profile(self.profile, self.model.two_type)

    def model_params(self, side: Optional[int] = None, seed: Optional[int] = None) -> ModelParams:
        m = self.model
        return ModelParams(
            side=side or m.side,
            drift=m.drift,
            beta=m.beta,
            horizon=m.horizon,
            seed=m.seed if seed is None else seed,
            max_events=m.max_events,
            two_type=m.two_type,
        )

    def pde_config(self) -> PdeConfig:
        """PdeConfig with dt = pde.dt, or the stability bound when unset."""
        p = self.pde
        config = PdeConfig(
            cells=p.cells,
            bins=p.bins,
            dt=p.dt or 1.0,
            drift=self.model.drift,
            beta=self.model.beta,
            horizon=self.model.horizon,
            ds_table=self.paths.ds_table,
            gamma_samples=p.gamma_samples,
            limiter=p.limiter,
            reaction=p.reaction,
            two_type=self.model.two_type,
            scheme=p.scheme,
            cfl=p.cfl,
        )
        if p.dt is None:
            config = dataclasses.replace(config, dt=stable_dt(config))
        return config

    def cells_for(self, side: int) -> int:
        return self.observation.cells or default_cells(side, self.observation.eps)

    @property
    def output_dir(self) -> Path:
        return Path(self.paths.output)


def merge(base: dict, override: dict) -> dict:
    """Recursive dict merge; values of `override` win."""
    out = dict(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = merge(out[key], value)
        else:
            out[key] = value
    return out


def substream_key(root: int, name: str, *indices: int) -> List[int]:
    """SeedSequence entropy of a named stream; recorded in manifests."""
    return [int(root), zlib.crc32(name.encode()), *map(int, indices)]


def substream(root: int, name: str, *indices: int) -> np.random.Generator:
    """Named, independent RNG stream derived from the root seed."""
    return np.random.default_rng(np.random.SeedSequence(substream_key(root, name, *indices)))


def preset_names() -> List[str]:
    return sorted(PRESETS)
