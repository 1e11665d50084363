"""
Configuration: YAML run configs validated by pydantic, initial-profile
presets and named RNG substreams.
"""

from .profiles import PRESET_DEFAULTS, PRESETS, build_profile
from .settings import (
    DEFAULT_CONFIG,
    SEED_ENV,
    CompareSection,
    ModelSection,
    ObservationSection,
    PdeSection,
    ProfileSection,
    RunConfig,
    merge,
    preset_names,
    substream,
    substream_key,
)

__all__ = [
    # Run config
    "RunConfig",
    "ModelSection",
    "ProfileSection",
    "ObservationSection",
    "PdeSection",
    "CompareSection",
    "DEFAULT_CONFIG",
    "SEED_ENV",
    "merge",
    # Seeds
    "substream",
    "substream_key",
    # Profiles
    "PRESETS",
    "PRESET_DEFAULTS",
    "build_profile",
    "preset_names",
]
