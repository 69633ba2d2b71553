"""Beamformed power angular spectra and cross-band similarity metrics.

A power angular spectrum (PAS) holds received power per azimuth bin. Passing
it through a steered array pattern gives the beamformed PAS, one value per
steering angle. Two bands are compared with

* PSP, the PAS similarity percentage: 100 * (1 - TV) between the normalized
  beamformed spectra, TV being the total variation distance;
* R, the high-band power collected at the beam directions picked from the
  low band, relative to the directions picked from the high band itself.
"""

from __future__ import annotations

from collections import namedtuple
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.stats import laplace

from .array import ArrayGeometry, array_power_gain
from .errors import ComparisonError, DomainError, EmptyChannelError, NormalizationError

R_FLOOR_DB = -100.0

Cluster = namedtuple("Cluster", "center_deg spread_deg power_db")


def angle_grid(step: float = 1.0) -> np.ndarray:
    n = int(round(180.0 / step))
    if not np.isclose(n * step, 180.0):
        raise DomainError(f"grid step {step} does not divide 180 degrees")
    return np.linspace(-90.0, 90.0, n + 1)


@dataclass(frozen=True, eq=False)
class PowerAngularSpectrum:
    angles: np.ndarray
    power: np.ndarray
    link_id: str = "0"

    def __post_init__(self):
        angles = np.asarray(self.angles, dtype=float)
        power = np.asarray(self.power, dtype=float)
        if angles.shape != power.shape or angles.ndim != 1:
            raise DomainError("angles and power must be 1-D arrays of equal length")
        if np.any(np.diff(angles) <= 0):
            raise DomainError("angle grid must be strictly increasing")
        if np.any(power < 0):
            raise DomainError("PAS power must be non-negative")
        object.__setattr__(self, "angles", angles)
        object.__setattr__(self, "power", power)

    @property
    def total_power(self) -> float:
        return float(self.power.sum())

    def scaled(self, factor: float) -> "PowerAngularSpectrum":
        return PowerAngularSpectrum(self.angles, self.power * factor, self.link_id)


@dataclass(frozen=True, eq=False)
class BeamformedPAS:
    steering: np.ndarray
    power: np.ndarray
    band_label: str
    source_geometry: ArrayGeometry


@dataclass(frozen=True)
class SimilarityResult:
    psp: float
    r_db: float
    k: int
    link_id: str


@dataclass(frozen=True)
class LinkEnsemble:
    band_pair: str
    results: tuple


@lru_cache(maxsize=64)
def _gain_matrix(geometry, steering: tuple, angles: tuple) -> np.ndarray:
    s = np.asarray(steering)[:, None]
    a = np.asarray(angles)[None, :]
    return array_power_gain(geometry, s, a)


def beamform(pas: PowerAngularSpectrum, geometry: ArrayGeometry, steering_grid=None, band_label="") -> BeamformedPAS:
    """Power collected at each steering angle: sum over bins of PAS * gain."""
    if pas.total_power <= 0:
        raise EmptyChannelError(f"link {pas.link_id}: PAS has zero power")
    steering = angle_grid() if steering_grid is None else np.asarray(steering_grid, dtype=float)
    if np.any(np.abs(steering) > 90):
        raise DomainError("steering angles must lie within +/-90 degrees")
    g = _gain_matrix(geometry, tuple(steering), tuple(pas.angles))
    return BeamformedPAS(steering, g @ pas.power, band_label, geometry)


def normalize(bpas) -> np.ndarray:
    """Beamformed powers scaled to a probability mass function."""
    p = np.asarray(getattr(bpas, "power", bpas), dtype=float)
    total = p.sum()
    if not total > 0:
        raise NormalizationError("cannot normalize zero total power")
    return p / total


def resample_nearest(mass, angles_from, angles_to) -> np.ndarray:
    """Move each mass to the nearest angle of ``angles_to`` (ties go to the lower angle)."""
    angles_from = np.asarray(angles_from, dtype=float)
    angles_to = np.asarray(angles_to, dtype=float)
    idx = np.searchsorted(angles_to, angles_from)
    idx = np.clip(idx, 1, len(angles_to) - 1)
    left = angles_to[idx - 1]
    right = angles_to[idx]
    idx = np.where(angles_from - left <= right - angles_from, idx - 1, idx)
    if len(angles_to) == 1:
        idx = np.zeros_like(idx)
    return np.bincount(idx, weights=np.asarray(mass, dtype=float), minlength=len(angles_to))


def nearest_index(grid, angles) -> np.ndarray:
    grid = np.asarray(grid, dtype=float)
    return np.array([int(np.argmin(np.abs(grid - a))) for a in np.atleast_1d(angles)], dtype=int)


def common_distributions(bpas_a: BeamformedPAS, bpas_b: BeamformedPAS):
    """Normalized spectra of both inputs on the coarser of their two steering grids."""
    pa, pb = normalize(bpas_a), normalize(bpas_b)
    sa, sb = bpas_a.steering, bpas_b.steering
    if len(sa) == len(sb) and np.array_equal(sa, sb):
        return pa, pb
    if len(sa) <= len(sb):
        pb = resample_nearest(pb, sb, sa)
    else:
        pa = resample_nearest(pa, sa, sb)
    if pa.shape != pb.shape:
        raise ComparisonError("distributions differ in length after resampling")
    return pa, pb


def total_variation(p, q) -> float:
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise ComparisonError(f"grid mismatch: {p.shape} vs {q.shape}")
    return 0.5 * float(np.abs(p - q).sum())


def psp(p_low, p_high) -> float:
    """PAS similarity percentage between two distributions on a common grid."""
    return min(100.0, max(0.0, 100.0 * (1.0 - total_variation(p_low, p_high))))


def top_k_directions(bpas: BeamformedPAS, k: int = 1) -> np.ndarray:
    """Steering angles of the ``k`` strongest beams.

    Ties prefer angles closer to broadside, then negative angles.
    """
    n = len(bpas.steering)
    if not 1 <= k <= n:
        raise DomainError(f"k must be in [1, {n}], got {k}")
    order = np.lexsort((bpas.steering, np.abs(bpas.steering), -bpas.power))
    return bpas.steering[order[:k]]


def r_ratio(bpas_high: BeamformedPAS, dirs_low, dirs_high) -> float:
    """High-band power at low-band picks relative to the high band's own picks, in dB."""
    dirs_low, dirs_high = np.atleast_1d(dirs_low), np.atleast_1d(dirs_high)
    if len(dirs_low) != len(dirs_high):
        raise DomainError("direction sets must have equal size")
    p = bpas_high.power
    # sorted index order keeps identical pick sets bit-exact (R == 0)
    den = p[np.sort(nearest_index(bpas_high.steering, dirs_high))].sum()
    if den <= 0:
        raise EmptyChannelError("high-band beamformed power is zero at its own best beams")
    # distinct beams only: two low-band picks may land on one high-band angle
    num = p[np.unique(nearest_index(bpas_high.steering, dirs_low))].sum()
    if num <= 0:
        return R_FLOOR_DB
    return max(R_FLOOR_DB, float(10.0 * np.log10(num / den)))


def compare(bpas_low: BeamformedPAS, bpas_high: BeamformedPAS, k: int = 1, link_id: str = "0") -> SimilarityResult:
    p_low, p_high = common_distributions(bpas_low, bpas_high)
    dirs_low = top_k_directions(bpas_low, k)
    dirs_high = top_k_directions(bpas_high, k)
    return SimilarityResult(psp(p_low, p_high), r_ratio(bpas_high, dirs_low, dirs_high), k, link_id)


def empirical_cdf(values) -> list:
    """Right-continuous step CDF as ``[(value, P(X <= value)), ...]``."""
    v = np.sort(np.asarray(values, dtype=float))
    if v.size == 0:
        raise DomainError("empirical CDF of an empty sample")
    uniq, counts = np.unique(v, return_counts=True)
    cum = np.cumsum(counts)
    return [(float(x), float(c / v.size)) for x, c in zip(uniq, cum)]


def synth_pas(seed: int, clusters, grid_step: float = 1.0, jitter_deg: float = 0.0, link_id: str = "0") -> PowerAngularSpectrum:
    """Sum of Laplacian clusters integrated over each angle bin.

    ``spread_deg`` is the RMS angular spread of a cluster and ``power_db`` its
    total power. Cluster centers move by Gaussian jitter drawn from ``seed``.
    """
    rng = np.random.default_rng(seed)
    angles = angle_grid(grid_step)
    lo = angles - grid_step / 2
    hi = angles + grid_step / 2
    power = np.zeros_like(angles)
    for cl in clusters:
        cl = Cluster(*cl)
        if cl.spread_deg <= 0:
            raise DomainError("cluster spread must be positive")
        center = cl.center_deg + (rng.normal(0.0, jitter_deg) if jitter_deg > 0 else 0.0)
        scale = cl.spread_deg / np.sqrt(2.0)
        mass = laplace.cdf(hi, center, scale) - laplace.cdf(lo, center, scale)
        power += 10 ** (cl.power_db / 10) * mass
    return PowerAngularSpectrum(angles, power, link_id)


@dataclass(frozen=True)
class BandSetup:
    label: str
    frequency: float
    n_elements: int

    def geometry(self) -> ArrayGeometry:
        return ArrayGeometry.ula(self.n_elements, self.frequency)


DEFAULT_BANDS = (
    BandSetup("FR1", 4e9, 4),
    BandSetup("FR3", 15e9, 16),
    BandSetup("FR2", 28e9, 28),
)
DEFAULT_PAIRS = (("FR1", "FR2"), ("FR1", "FR3"), ("FR3", "FR2"))


def random_clusters(rng, max_clusters: int = 4):
    n = int(rng.integers(1, max_clusters + 1))
    out = []
    for i in range(n):
        out.append(Cluster(
            float(rng.uniform(-60, 60)),
            float(rng.uniform(2, 10)),
            0.0 if i == 0 else float(rng.uniform(-15, 0)),
        ))
    return out


def synthetic_link(seed: int, index: int, bands=DEFAULT_BANDS, jitter_deg: float = 3.0, grid_step: float = 1.0) -> dict:
    """PAS per band for one synthetic link.

    All bands share the same clusters; each band draws its own center jitter
    and a per-cluster power perturbation from a generator keyed on
    ``(seed, index, band)``.
    """
    base = random_clusters(np.random.default_rng([seed, index]))
    out = {}
    for b, band in enumerate(bands):
        rng = np.random.default_rng([seed, index, b + 1])
        perturbed = [
            Cluster(c.center_deg, c.spread_deg, c.power_db + float(rng.normal(0.0, 2.0)))
            for c in base
        ]
        out[band.label] = synth_pas(
            int(rng.integers(2**31)), perturbed, grid_step, jitter_deg, link_id=f"link{index:05d}"
        )
    return out


def evaluate_links(links, bands=DEFAULT_BANDS, pairs=DEFAULT_PAIRS, k: int = 1, steering_grid=None) -> dict:
    """Similarity results per band pair for ``links`` (mapping link_id -> {band: PAS}).

    Results within an ensemble are ordered by link id.
    """
    by_label = {b.label: b for b in bands}
    steering = angle_grid() if steering_grid is None else np.asarray(steering_grid, dtype=float)
    out = {}
    for lo, hi in pairs:
        results = []
        for link_id in sorted(links):
            spectra = links[link_id]
            b_lo = beamform(spectra[lo], by_label[lo].geometry(), steering, lo)
            b_hi = beamform(spectra[hi], by_label[hi].geometry(), steering, hi)
            results.append(compare(b_lo, b_hi, k, link_id))
        out[f"{lo}-{hi}"] = LinkEnsemble(f"{lo}-{hi}", tuple(results))
    return out


def read_pas_csv(path) -> dict:
    """Load ``link_id, angle_deg, power_linear`` rows into PAS objects keyed by link id."""
    import csv

    rows = {}
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        need = {"link_id", "angle_deg", "power_linear"}
        if reader.fieldnames is None or not need <= set(reader.fieldnames):
            raise DomainError(f"{path}: expected columns {sorted(need)}")
        for row in reader:
            rows.setdefault(row["link_id"], []).append((float(row["angle_deg"]), float(row["power_linear"])))
    out = {}
    for link_id, pts in rows.items():
        pts.sort()
        out[link_id] = PowerAngularSpectrum([a for a, _ in pts], [p for _, p in pts], link_id)
    return out


def load_pas_dir(directory, labels) -> dict:
    """Read ``<label>.csv`` for each band label; returns link_id -> {label: PAS}."""
    from pathlib import Path

    per_band = {label: read_pas_csv(Path(directory) / f"{label}.csv") for label in labels}
    id_sets = [set(v) for v in per_band.values()]
    ids = set.intersection(*id_sets)
    if not ids or any(s != ids for s in id_sets):
        raise ComparisonError(f"band files under {directory} do not cover the same links")
    return {i: {label: per_band[label][i] for label in labels} for i in ids}
