"""Frequency band registry, FR classification and carrier aggregation math."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from scipy.constants import c as SPEED_OF_LIGHT

from .errors import ConfigurationError, InvalidSchemeError, ModeMismatchError

GHz = 1e9
MHz = 1e6

STATUSES = ("allocated", "conditional", "study", "fr-definition")
MODES = ("contiguous", "non-contiguous")
FR_LABELS = ("FR1", "FR2", "FR3")

# Bands potentially allocated to mobile service on a primary basis (the ~9 GHz list).
MOBILE_PRIMARY_STATUSES = frozenset({"conditional", "study"})


@dataclass(frozen=True)
class FrequencyBand:
    label: str
    low: float
    high: float
    status: str = "allocated"
    services: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if not self.label:
            raise ConfigurationError("band label must be nonempty", "label")
        if not (0 < self.low < self.high):
            raise ConfigurationError(
                f"band {self.label!r}: need 0 < low < high, got {self.low}, {self.high}", "low"
            )
        if self.status not in STATUSES:
            raise ConfigurationError(f"band {self.label!r}: unknown status {self.status!r}", "status")
        object.__setattr__(self, "services", frozenset(self.services))

    @property
    def width(self) -> float:
        return self.high - self.low

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "low_hz": self.low,
            "high_hz": self.high,
            "status": self.status,
            "services": sorted(self.services),
        }


@dataclass(frozen=True)
class BandPlan:
    """Immutable, low-sorted collection of bands with unique labels."""

    bands: tuple

    def __post_init__(self):
        bands = tuple(sorted(self.bands, key=lambda b: (b.low, b.high, b.label)))
        labels = [b.label for b in bands]
        if len(set(labels)) != len(labels):
            dup = sorted({x for x in labels if labels.count(x) > 1})
            raise ConfigurationError(f"duplicate band labels: {dup}", "label")
        frs = [b for b in bands if b.status == "fr-definition"]
        for a, b in zip(frs, frs[1:]):
            if b.low < a.high:
                raise ConfigurationError(
                    f"fr-definition bands {a.label!r} and {b.label!r} overlap", "status"
                )
        object.__setattr__(self, "bands", bands)

    def __iter__(self):
        return iter(self.bands)

    def __len__(self):
        return len(self.bands)

    def get(self, label: str) -> FrequencyBand:
        for b in self.bands:
            if b.label == label:
                return b
        raise KeyError(label)

    def to_json(self) -> list:
        return [b.to_dict() for b in self.bands]


def _band(label, low_ghz, high_ghz, status, *services):
    return FrequencyBand(label, low_ghz * GHz, high_ghz * GHz, status, frozenset(services))


def default_band_plan() -> BandPlan:
    """3GPP FR definitions plus the WRC/3GPP candidate bands in 7-24 GHz."""
    return BandPlan((
        _band("FR1", 0.45, 6.0, "fr-definition"),
        _band("FR3", 7.125, 24.25, "fr-definition"),
        _band("FR2", 24.25, 52.6, "fr-definition"),
        _band("IMT-6.425-7.125", 6.425, 7.125, "allocated", "IMT"),
        _band("IMT-7.125-8.4", 7.125, 8.4, "study", "IMT"),
        _band("IMT-10-10.5", 10.0, 10.5, "conditional", "IMT"),
        _band("MS-10.7-13.25", 10.7, 13.25, "study", "mobile-primary"),
        _band("IMT-14.8-15.35", 14.8, 15.35, "study", "IMT"),
        _band("MS-17.7-19.7", 17.7, 19.7, "study", "mobile-primary"),
        _band("MS-21.2-23.6", 21.2, 23.6, "study", "mobile-primary"),
        _band("SAT-DL-10.7-12.7", 10.7, 12.7, "allocated", "satellite-downlink"),
        _band("SAT-UL-14.0-14.5", 14.0, 14.5, "allocated", "satellite-uplink"),
        _band("ISL-22.55-23.55", 22.55, 23.55, "allocated", "inter-satellite"),
    ))


def band_plan_from_json(doc) -> BandPlan:
    if not isinstance(doc, list):
        raise ConfigurationError("band plan must be a JSON array", "bands")
    bands = []
    keys = {"label", "low_hz", "high_hz", "status", "services"}
    for i, item in enumerate(doc):
        if not isinstance(item, dict):
            raise ConfigurationError(f"band entry {i} is not an object", f"bands[{i}]")
        extra = set(item) - keys
        if extra:
            k = sorted(extra)[0]
            raise ConfigurationError(f"unknown key {k!r}", f"bands[{i}].{k}")
        missing = {"label", "low_hz", "high_hz"} - set(item)
        if missing:
            k = sorted(missing)[0]
            raise ConfigurationError(f"missing key {k!r}", f"bands[{i}].{k}")
        try:
            bands.append(FrequencyBand(
                str(item["label"]),
                float(item["low_hz"]),
                float(item["high_hz"]),
                item.get("status", "allocated"),
                frozenset(item.get("services", ())),
            ))
        except ConfigurationError as exc:
            raise ConfigurationError(str(exc), f"bands[{i}].{exc.key_path}") from exc
        except (TypeError, ValueError) as exc:
            raise ConfigurationError(str(exc), f"bands[{i}]") from exc
    return BandPlan(tuple(bands))


def load_band_plan(path) -> BandPlan:
    return band_plan_from_json(json.loads(Path(path).read_text()))


def classify_fr(frequency: float, plan: BandPlan | None = None) -> str:
    """Return "FR1", "FR2", "FR3" or "unclassified".

    Intervals are low-inclusive and high-exclusive; the highest FR band also
    includes its upper edge.
    """
    if frequency <= 0:
        raise ConfigurationError(f"frequency must be positive, got {frequency}", "frequency")
    plan = default_band_plan() if plan is None else plan
    frs = {b.label: b for b in plan if b.status == "fr-definition" and b.label in FR_LABELS}
    missing = [x for x in FR_LABELS if x not in frs]
    if missing:
        raise ConfigurationError(f"band plan lacks fr-definition bands {missing}", "bands")
    top = max(frs.values(), key=lambda b: b.high)
    for label, b in frs.items():
        if b.low <= frequency < b.high or (b is top and frequency == b.high):
            return label
    return "unclassified"


def merge_intervals(intervals: Iterable[tuple]) -> list:
    """Union of closed intervals as a sorted list of disjoint (low, high) pairs."""
    merged = []
    for lo, hi in sorted(intervals):
        if merged and lo <= merged[-1][1]:
            if hi > merged[-1][1]:
                merged[-1][1] = hi
        else:
            merged.append([lo, hi])
    return [tuple(x) for x in merged]


def union_measure(intervals: Iterable[tuple]) -> float:
    return sum(hi - lo for lo, hi in merge_intervals(intervals))


def total_identified_bandwidth(plan: BandPlan, status_filter=MOBILE_PRIMARY_STATUSES) -> float:
    """Bandwidth in Hz covered by bands whose status is in ``status_filter``.

    Overlapping bands are merged first, so nothing is double counted.
    """
    return union_measure((b.low, b.high) for b in plan if b.status in status_filter)


@dataclass(frozen=True)
class AggregationScheme:
    carriers: tuple
    mode: str = "non-contiguous"

    def __post_init__(self):
        object.__setattr__(self, "carriers", tuple(self.carriers))
        if self.mode not in MODES:
            raise InvalidSchemeError(f"unknown aggregation mode {self.mode!r}")
        if not self.carriers:
            raise InvalidSchemeError("aggregation scheme needs at least one carrier")
        if self.mode == "contiguous" and len(merge_intervals((b.low, b.high) for b in self.carriers)) > 1:
            raise ModeMismatchError("contiguous scheme has a gap between carriers")


@dataclass(frozen=True)
class AggregationResult:
    aperture_hz: float
    occupied_hz: float
    sparsity: float
    delay_resolution_s: float
    range_resolution_m: float


def aggregate(scheme: AggregationScheme, speed_of_light: float = SPEED_OF_LIGHT) -> AggregationResult:
    intervals = [(b.low, b.high) for b in scheme.carriers]
    aperture = max(hi for _, hi in intervals) - min(lo for lo, _ in intervals)
    occupied = union_measure(intervals)
    merged = merge_intervals(intervals)
    sparsity = 1.0 if len(merged) == 1 else occupied / aperture
    return AggregationResult(
        aperture_hz=aperture,
        occupied_hz=occupied,
        sparsity=sparsity,
        delay_resolution_s=1.0 / aperture,
        range_resolution_m=speed_of_light / (2.0 * aperture),
    )


def carrier(low: float, high: float, label: str | None = None) -> FrequencyBand:
    """Shorthand for an ad-hoc carrier band."""
    return FrequencyBand(label or f"{low / GHz:g}-{high / GHz:g}GHz", low, high, "allocated")
