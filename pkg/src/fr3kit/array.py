"""Uniform phased arrays: steered power patterns, directivity and beamwidth.

Arrays lie in the y-z plane with broadside along +x. A direction is given by
azimuth (from broadside, in the horizontal plane) and elevation, in degrees.
Elements are isotropic and uniformly weighted; ``n_x`` counts elements along
the horizontal axis and ``n_y`` along the vertical one.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT
from scipy.optimize import brentq

from .errors import BeamwidthUndefinedError, DomainError, NumericalAccuracyError

PITCH_RULES = ("half_wavelength", "full_wavelength")

# Apertures are usually quoted to ~3 significant figures (8.56 cm is one
# wavelength at 3.5 GHz); ratios within this relative tolerance of an
# integer count as that integer.
COUNT_RTOL = 1e-3


class DegenerateApertureWarning(UserWarning):
    pass


def wavelength(frequency: float) -> float:
    return SPEED_OF_LIGHT / frequency


@dataclass(frozen=True)
class ArrayGeometry:
    kind: str
    n_x: int
    n_y: int
    spacing: float
    frequency: float

    def __post_init__(self):
        if self.kind not in ("ULA", "URA"):
            raise DomainError(f"unknown array kind {self.kind!r}")
        if self.n_x < 1 or self.n_y < 1:
            raise DomainError("element counts must be >= 1")
        if self.kind == "ULA" and self.n_y != 1:
            raise DomainError("a ULA has n_y == 1")
        if self.spacing <= 0 or self.frequency <= 0:
            raise DomainError("spacing and frequency must be positive")

    @property
    def wavelength(self) -> float:
        return wavelength(self.frequency)

    @property
    def n_elements(self) -> int:
        return self.n_x * self.n_y

    @classmethod
    def ula(cls, n, frequency, spacing=None):
        """``n``-element line array, half-wavelength pitch unless ``spacing`` is given."""
        if spacing is None:
            spacing = wavelength(frequency) / 2
        return cls("ULA", int(n), 1, spacing, frequency)

    @classmethod
    def ura(cls, n_x, n_y, frequency, spacing=None):
        if spacing is None:
            spacing = wavelength(frequency) / 2
        return cls("URA", int(n_x), int(n_y), spacing, frequency)

    @classmethod
    def for_aperture(cls, side, frequency, kind="URA", pitch_rule="half_wavelength"):
        n = elements_for_aperture(side, frequency, pitch_rule)
        pitch = wavelength(frequency) / (2 if pitch_rule == "half_wavelength" else 1)
        if kind == "ULA":
            return cls("ULA", n, 1, pitch, frequency)
        return cls("URA", n, n, pitch, frequency)


def _snap_floor(x: float) -> int:
    return int(math.floor(x * (1 + COUNT_RTOL)))


def elements_for_aperture(aperture_side: float, frequency: float, pitch_rule: str = "half_wavelength") -> int:
    """Element count per side that fits within ``aperture_side``.

    Half-wavelength pitch counts elements spanning the aperture, so one pitch
    gives two elements. Full-wavelength pitch counts unit cells of size lambda
    and may return 0, in which case a ``DegenerateApertureWarning`` is issued.
    """
    if aperture_side <= 0 or frequency <= 0:
        raise DomainError("aperture_side and frequency must be positive")
    lam = wavelength(frequency)
    if pitch_rule == "half_wavelength":
        return _snap_floor(aperture_side / (lam / 2)) + 1
    if pitch_rule == "full_wavelength":
        n = _snap_floor(aperture_side / lam)
        if n == 0:
            warnings.warn(
                f"aperture {aperture_side} m is smaller than one wavelength at {frequency:g} Hz",
                DegenerateApertureWarning,
                stacklevel=2,
            )
        return n
    raise DomainError(f"unknown pitch rule {pitch_rule!r}")


def _axis_power(n, phase):
    """|sum_m exp(j m phase)|^2 for m = 0..n-1, elementwise over ``phase``.

    Uses the Dirichlet kernel (sin(n x / 2) / sin(x / 2))^2; within 1e-6 of a
    grating direction the value is n^2 to double precision.
    """
    phase = np.asarray(phase, dtype=float)
    if n == 1:
        return np.ones_like(phase)
    half = phase / 2
    den = np.sin(half)
    small = np.abs(den) < 1e-6
    safe = np.where(small, 1.0, den)
    out = (np.sin(n * half) / safe) ** 2
    return np.where(small, float(n * n), out)


def _split(angle):
    """Accept an azimuth scalar/array or an (azimuth, elevation) pair."""
    if isinstance(angle, tuple):
        az, el = angle
    else:
        az, el = angle, 0.0
    return np.asarray(az, dtype=float), np.asarray(el, dtype=float)


def normalized_pattern(geometry: ArrayGeometry, steer, arrival):
    """|AF|^2 / N^2 in [0, 1]; angles in degrees, see :func:`array_power_gain`."""
    s_az, s_el = (np.deg2rad(x) for x in _split(steer))
    a_az, a_el = (np.deg2rad(x) for x in _split(arrival))
    kd = 2 * np.pi * geometry.spacing / geometry.wavelength
    # direction cosines along the horizontal (y) and vertical (z) array axes
    uy = np.sin(a_az) * np.cos(a_el) - np.sin(s_az) * np.cos(s_el)
    uz = np.sin(a_el) - np.sin(s_el)
    p = _axis_power(geometry.n_x, kd * uy) * _axis_power(geometry.n_y, kd * uz)
    return p / geometry.n_elements**2


def _integrated_pattern(geometry: ArrayGeometry, step_deg: float) -> float:
    """Integral over the sphere of the broadside |AF|^2 / N^2.

    Midpoint rule in azimuth; each elevation row is weighted by its exact
    solid angle, 2 sin(h/2) cos(el) per radian of azimuth.
    """
    h = np.deg2rad(step_deg)
    az = np.arange(-np.pi + h / 2, np.pi, h)
    el = np.arange(-np.pi / 2 + h / 2, np.pi / 2, h)
    kd = 2 * np.pi * geometry.spacing / geometry.wavelength
    py = _axis_power(geometry.n_x, kd * np.outer(np.sin(az), np.cos(el)))
    pz = _axis_power(geometry.n_y, kd * np.sin(el))
    total = (py * (pz * np.cos(el))[None, :]).sum() * h * 2 * np.sin(h / 2)
    return total / geometry.n_elements**2


@lru_cache(maxsize=256)
def directivity_linear(geometry: ArrayGeometry, grid_step: float = 0.5) -> float:
    """Broadside directivity 4*pi*peak / integral, checked against a refined grid."""
    coarse = _integrated_pattern(geometry, grid_step)
    fine = _integrated_pattern(geometry, grid_step / 2)
    if abs(coarse - fine) > 0.01 * fine:
        raise NumericalAccuracyError(
            f"pattern integral changed by {abs(coarse - fine) / fine:.2%} on grid refinement"
        )
    return 4 * np.pi / fine


def directivity(geometry: ArrayGeometry, grid_step: float = 0.5) -> float:
    """Broadside directivity in dBi, by numerical integration over the sphere."""
    return 10 * math.log10(directivity_linear(geometry, grid_step))


def array_power_gain(geometry: ArrayGeometry, steer, arrival):
    """Linear power gain towards ``arrival`` for a beam steered to ``steer``.

    Angles are azimuths in degrees, or ``(azimuth, elevation)`` tuples for
    URA patterns; numpy arrays broadcast. The peak equals the linear
    broadside directivity.
    """
    for a in (*_split(steer), *_split(arrival)):
        if np.any(np.abs(a) > 90 + 1e-9):
            raise DomainError("angles must lie within +/-90 degrees of broadside")
    return directivity_linear(geometry) * normalized_pattern(geometry, steer, arrival)


def _half_power_angle(cut, limit=90.0, scan_step=0.01):
    """First angle in (0, limit] where ``cut`` (peak 1 at 0) falls to 0.5."""
    grid = np.arange(0.0, limit + scan_step / 2, scan_step)
    vals = cut(grid) - 0.5
    below = np.nonzero(vals <= 0)[0]
    if below.size == 0:
        raise BeamwidthUndefinedError("pattern never drops 3 dB within the visible region")
    i = below[0]
    if vals[i] == 0:
        return float(grid[i])
    return brentq(lambda t: float(cut(np.array(t)) - 0.5), grid[i - 1], grid[i], xtol=1e-10)


def hpbw(geometry: ArrayGeometry, plane: str = "azimuth") -> float:
    """Half-power beamwidth of the broadside beam in degrees."""
    if plane not in ("azimuth", "elevation"):
        raise DomainError(f"unknown plane {plane!r}")

    def cut(sign):
        if plane == "azimuth":
            return lambda t: normalized_pattern(geometry, 0.0, sign * t)
        return lambda t: normalized_pattern(geometry, (0.0, 0.0), (0.0, sign * t))

    return _half_power_angle(cut(1.0)) + _half_power_angle(cut(-1.0))


_SINC2_HALF_POWER = brentq(lambda u: np.sinc(u) ** 2 - 0.5, 0.1, 0.9, xtol=1e-15)


def aperture_hpbw(aperture_side: float, frequency: float) -> float:
    """Beamwidth in degrees of a uniformly illuminated aperture of fixed size.

    This is the limit of a uniform array of fixed length as the pitch goes to
    zero: the pattern is sinc^2(L sin(theta) / lambda), so it varies smoothly
    with frequency instead of jumping with the integer element count.
    """
    if aperture_side <= 0 or frequency <= 0:
        raise DomainError("aperture_side and frequency must be positive")
    s = _SINC2_HALF_POWER * wavelength(frequency) / aperture_side
    if s >= 1:
        raise BeamwidthUndefinedError(
            f"aperture {aperture_side} m too small for a 3 dB beam at {frequency:g} Hz"
        )
    return 2 * math.degrees(math.asin(s))
