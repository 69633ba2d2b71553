"""Free-space link math and the coverage/capacity trade-off scan."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT

from . import array as arr
from .errors import ConfigurationError, DomainError

HPBW_MODELS = ("aperture", "elements")


def fspl(frequency: float, distance: float) -> float:
    """Free-space path loss in dB."""
    if frequency <= 0 or distance <= 0:
        raise DomainError("frequency and distance must be positive")
    return 20 * math.log10(4 * math.pi * distance * frequency / SPEED_OF_LIGHT)


def coverage_radius(height: float, hpbw_deg: float) -> float:
    """Ground radius lit by a nadir-pointing beam of the given width."""
    if not 0 <= hpbw_deg < 180:
        raise DomainError(f"hpbw must be in [0, 180) degrees, got {hpbw_deg}")
    return height * math.tan(math.radians(hpbw_deg) / 2)


def shannon_capacity(bandwidth: float, snr_db: float) -> float:
    if bandwidth < 0:
        raise DomainError("bandwidth must be non-negative")
    return bandwidth * math.log2(1 + 10 ** (snr_db / 10))


@dataclass(frozen=True)
class LinkScenario:
    height: float = 100.0
    aperture_side: float = 0.0856
    f_min: float = 3e9
    f_max: float = 30e9
    bw_min: float = 20e6
    bw_max: float = 200e6
    snr_db: float = 10.0
    scan_step: float = 50e6
    # "aperture": smooth fixed-aperture beamwidth; "elements": integer half-wavelength URA
    hpbw_model: str = "aperture"

    def __post_init__(self):
        checks = [
            (self.height > 0, "height"),
            (self.aperture_side > 0, "aperture_side"),
            (0 < self.f_min < self.f_max, "f_min"),
            (0 <= self.bw_min < self.bw_max, "bw_min"),
            (self.scan_step > 0, "scan_step"),
            (self.hpbw_model in HPBW_MODELS, "hpbw_model"),
        ]
        for ok, key in checks:
            if not ok:
                raise ConfigurationError(f"invalid value for {key!r}", key)

    def frequencies(self) -> np.ndarray:
        n = int(math.floor((self.f_max - self.f_min) / self.scan_step + 1e-9)) + 1
        f = self.f_min + self.scan_step * np.arange(n)
        if self.f_max - f[-1] > 1e-6 * self.scan_step:
            f = np.append(f, self.f_max)
        return f


def bandwidth_map(frequency: float, scenario: LinkScenario) -> float:
    """Linear frequency-to-bandwidth mapping across the scan range."""
    s = scenario
    if not s.f_min <= frequency <= s.f_max:
        raise DomainError(f"frequency {frequency:g} outside [{s.f_min:g}, {s.f_max:g}]")
    return s.bw_min + (s.bw_max - s.bw_min) * (frequency - s.f_min) / (s.f_max - s.f_min)


def scan_hpbw(frequency: float, scenario: LinkScenario) -> float:
    if scenario.hpbw_model == "aperture":
        return arr.aperture_hpbw(scenario.aperture_side, frequency)
    geom = arr.ArrayGeometry.for_aperture(scenario.aperture_side, frequency)
    return arr.hpbw(geom, "azimuth")


@dataclass(frozen=True)
class TradeoffPoint:
    frequency: float
    hpbw: float
    radius: float
    bandwidth: float
    capacity: float
    cov_norm: float
    cap_norm: float
    n_cc: float


def _minmax(x):
    span = x.max() - x.min()
    if span == 0:
        return np.zeros_like(x)
    return (x - x.min()) / span


def ncc_scan(scenario: LinkScenario) -> list:
    freqs = scenario.frequencies()
    hp = np.array([scan_hpbw(f, scenario) for f in freqs])
    radius = np.array([coverage_radius(scenario.height, h) for h in hp])
    bw = np.array([bandwidth_map(f, scenario) for f in freqs])
    cap = np.array([shannon_capacity(b, scenario.snr_db) for b in bw])
    cov_n, cap_n = _minmax(radius), _minmax(cap)
    return [
        TradeoffPoint(float(f), float(h), float(r), float(b), float(c), float(a), float(p), float(abs(a - p)))
        for f, h, r, b, c, a, p in zip(freqs, hp, radius, bw, cap, cov_n, cap_n)
    ]


def _segment_interval(f0, f1, d0, d1, t):
    """Sub-interval of [f0, f1] where |d| <= t, d linear between d0 and d1."""
    if d0 == d1:
        return (f0, f1) if abs(d0) <= t else None
    # parameter s in [0, 1] with d = d0 + s (d1 - d0)
    lo_s = (-t - d0) / (d1 - d0)
    hi_s = (t - d0) / (d1 - d0)
    lo_s, hi_s = min(lo_s, hi_s), max(lo_s, hi_s)
    lo_s, hi_s = max(lo_s, 0.0), min(hi_s, 1.0)
    if lo_s > hi_s:
        return None
    return (f0 + lo_s * (f1 - f0), f0 + hi_s * (f1 - f0))


def balanced_band(scan: list, threshold: float = 0.5):
    """Longest frequency interval where n_cc <= threshold.

    The signed gap cov_norm - cap_norm is interpolated linearly between scan
    points, so band edges fall between samples. Returns ``(f_low, f_high)``,
    or ``None`` when no frequency meets the threshold.
    """
    if not scan:
        raise DomainError("empty scan")
    f = [p.frequency for p in scan]
    d = [p.cov_norm - p.cap_norm for p in scan]
    if len(scan) == 1:
        return (f[0], f[0]) if abs(d[0]) <= threshold else None
    pieces = []
    for i in range(len(scan) - 1):
        seg = _segment_interval(f[i], f[i + 1], d[i], d[i + 1], threshold)
        if seg is None:
            continue
        if pieces and seg[0] <= pieces[-1][1]:
            pieces[-1][1] = max(pieces[-1][1], seg[1])
        else:
            pieces.append([seg[0], seg[1]])
    if not pieces:
        return None
    best = max(pieces, key=lambda p: (p[1] - p[0], -p[0]))
    return (best[0], best[1])
