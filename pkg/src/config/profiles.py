"""
Named initial profiles.

Each preset maps (density, amplitude, kappa) to an InitialProfile; unset
density/amplitude fall back to the preset's own defaults.
"""

import math
from typing import Callable, Dict, Tuple

import numpy as np
from scipy.special import i0e

from src.errors import ConfigError
from src.lattice import TWO_PI, InitialProfile

# preset -> (density, amplitude)
PRESET_DEFAULTS: Dict[str, Tuple[float, float]] = {
    "constant": (0.5, 0.0),
    "cosine": (0.4, 0.2),
    "heat": (0.3, 0.1),
    "two_type_bump": (0.3, 0.15),
    "aligned_cosine": (0.4, 0.2),
    "table": (0.0, 0.0),
}


def _cosine_density(density: float, amplitude: float) -> Callable:
    def rho(u1, u2):
        return density + amplitude * np.cos(2.0 * math.pi * np.asarray(u1)) + 0.0 * np.asarray(u2)

    return rho


def _uniform(name: str, rho: Callable, two_type: bool) -> InitialProfile:
    """Angles uniform on the circle, or split evenly between 0 and pi in two-type runs."""
    if two_type:
        return InitialProfile.two_type(
            lambda u1, u2: 0.5 * rho(u1, u2), lambda u1, u2: 0.5 * rho(u1, u2), name=name
        )
    return InitialProfile.uniform_angles(rho, name=name)


def constant(density: float, amplitude: float, kappa: float, two_type: bool) -> InitialProfile:
    return _uniform(f"constant-{density}", _cosine_density(density, 0.0), two_type)


def cosine(density: float, amplitude: float, kappa: float, two_type: bool) -> InitialProfile:
    return _uniform("cosine", _cosine_density(density, amplitude), two_type)


def heat(density: float, amplitude: float, kappa: float, two_type: bool) -> InitialProfile:
    return _uniform("heat", _cosine_density(density, amplitude), two_type)


def two_type_bump(density: float, amplitude: float, kappa: float, two_type: bool) -> InitialProfile:
    """+ bump centered at u_1 = 1/4, - bump varying along u_2."""

    def plus(u1, u2):
        return 0.5 * density + amplitude * np.cos(2.0 * math.pi * (np.asarray(u1) - 0.25)) + 0.0 * np.asarray(u2)

    def minus(u1, u2):
        return 0.5 * density + 0.5 * amplitude * np.cos(2.0 * math.pi * (np.asarray(u2) - 0.75)) + 0.0 * np.asarray(u1)

    return InitialProfile.two_type(plus, minus, name="two_type_bump")


def aligned_cosine(density: float, amplitude: float, kappa: float, two_type: bool) -> InitialProfile:
    """Cosine density with a von Mises(kappa) angle law centered at 0."""
    rho = _cosine_density(density, amplitude)
    norm = TWO_PI * i0e(kappa)

    def zeta_hat(u1, u2, theta):
        return np.asarray(rho(u1, u2)) * np.exp(kappa * (np.cos(theta) - 1.0)) / norm

    return InitialProfile.continuous(zeta_hat, name=f"aligned_cosine-{kappa}", resolution=64)


PRESETS: Dict[str, Callable[..., InitialProfile]] = {
    "constant": constant,
    "cosine": cosine,
    "heat": heat,
    "two_type_bump": two_type_bump,
    "aligned_cosine": aligned_cosine,
}


def build_profile(section, two_type: bool = False) -> InitialProfile:
    """InitialProfile for a validated ProfileSection."""
    if section.preset == "table":
        return InitialProfile.from_table(np.load(section.table), name=f"table:{section.table}")
    if section.preset not in PRESETS:
        raise ConfigError(f"unknown profile preset '{section.preset}'", [("profile.preset", section.preset)])
    default_density, default_amplitude = PRESET_DEFAULTS[section.preset]
    density = default_density if section.density is None else section.density
    amplitude = default_amplitude if section.amplitude is None else section.amplitude
    return PRESETS[section.preset](density, amplitude, section.kappa, two_type)
