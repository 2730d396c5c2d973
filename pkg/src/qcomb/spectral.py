"""Closed-form spectral factors: pump profile, phase matching, filters.

All frequencies are angular (rad/s). FWHM conventions are on intensity
(squared modulus) throughout.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DeltaPumpError, ValidationError

_LN2 = math.log(2.0)

# Half width at half maximum of sinc^2(x) = (sin x / x)^2, i.e. the root of
# sinc^2(x) = 1/2. The argument scale 2*X_HALF/bandwidth makes the intensity
# FWHM of the sinc profile equal the configured bandwidth.
SINC_INTENSITY_HWHM = 1.3915573782515062


class PumpMode(enum.Enum):
    MONOCHROMATIC = "monochromatic"
    GAUSSIAN_BROADBAND = "gaussian_broadband"


class PhaseMatchShape(enum.Enum):
    SINC = "sinc"
    GAUSSIAN = "gaussian"


class FilterShape(enum.Enum):
    GAUSSIAN = "gaussian"
    TOPHAT = "tophat"


@dataclass(frozen=True)
class PumpSpec:
    """Pump laser: center frequency, mode, and intensity-FWHM linewidth."""

    center_frequency: float
    mode: PumpMode = PumpMode.MONOCHROMATIC
    linewidth: float = 0.0

    def __post_init__(self):
        if self.center_frequency <= 0:
            raise ValidationError("pump center_frequency must be positive")
        if self.linewidth < 0:
            raise ValidationError("pump linewidth must be nonnegative")


@dataclass(frozen=True)
class PhaseMatchSpec:
    """Phase-matching profile of the nonlinear medium.

    bandwidth is the intensity FWHM of the main feature in the difference
    frequency; walkoff (s) and dispersion (s^2) are the first and second
    order spectral-phase coefficients.
    """

    degeneracy_frequency: float
    bandwidth: float
    walkoff: float = 0.0
    dispersion: float = 0.0
    shape: PhaseMatchShape = PhaseMatchShape.SINC

    def __post_init__(self):
        if self.bandwidth <= 0:
            raise ValidationError("phase-match bandwidth must be positive")


@dataclass(frozen=True)
class FilterSpec:
    """Spectral amplitude filter acting on individual photon frequencies."""

    center: float
    bandwidth: float
    shape: FilterShape = FilterShape.GAUSSIAN

    def __post_init__(self):
        if self.bandwidth <= 0:
            raise ValidationError("filter bandwidth must be positive")


def eval_pump(spec: PumpSpec, omega_plus):
    """Pump spectral amplitude at the sum frequency.

    Unit peak at the pump center; the intensity FWHM equals the configured
    linewidth. Monochromatic pumps are formal deltas and cannot be
    point-evaluated.
    """
    if spec.mode is PumpMode.MONOCHROMATIC:
        raise DeltaPumpError(
            "delta pump not evaluable; use the monochromatic 1D reduction"
        )
    d = np.asarray(omega_plus, dtype=float) - spec.center_frequency
    return np.exp(-2.0 * _LN2 * d * d / (spec.linewidth**2))


def eval_phase_match(spec: PhaseMatchSpec, omega_plus, omega_minus):
    """Complex phase-matching amplitude.

    The amplitude is even in the difference frequency; the spectral phase
    walkoff*w/2 + dispersion*w^2/2 is carried on top. Dependence on the sum
    frequency is neglected over the simulated window.
    """
    w = np.asarray(omega_minus, dtype=float)
    if spec.shape is PhaseMatchShape.SINC:
        x = 2.0 * SINC_INTENSITY_HWHM * w / spec.bandwidth
        amp = np.sinc(x / np.pi)  # sin(x)/x
    else:
        amp = np.exp(-2.0 * _LN2 * w * w / (spec.bandwidth**2))
    phase = spec.walkoff * w / 2.0 + spec.dispersion * w * w / 2.0
    return amp * np.exp(1j * phase)


def eval_filter(spec: FilterSpec, omega):
    """Real filter amplitude in [0, 1] at a photon frequency."""
    d = np.asarray(omega, dtype=float) - spec.center
    if spec.shape is FilterShape.TOPHAT:
        return (np.abs(d) <= spec.bandwidth / 2.0).astype(float)
    return np.exp(-2.0 * _LN2 * d * d / (spec.bandwidth**2))
