"""Per-subcommand scenario configs and their JSON schema validation.

A config document is a flat JSON object whose keys mirror the fields of the
subcommand's config dataclass. Missing keys take the defaults below (the
published case-study setups); unknown keys are rejected.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field

from scipy.constants import c as SPEED_OF_LIGHT

from .errors import ConfigurationError
from .linkbudget import LinkScenario
from .ris import RisScenario

SUBCOMMANDS = ("spectrum", "array", "tradeoff", "pas", "ris")


@dataclass(frozen=True)
class SpectrumConfig:
    band_plan: str | None = field(default=None, metadata={"type": str})
    status_filter: tuple = ("conditional", "study")
    frequencies: tuple = (3.5e9, 6.5e9, 15e9, 28e9)
    carriers: tuple = ((15.0e9, 15.4e9), (28.0e9, 28.4e9))
    mode: str = "non-contiguous"
    speed_of_light: float = SPEED_OF_LIGHT

    def __post_init__(self):
        for i, c in enumerate(self.carriers):
            if len(c) != 2:
                raise ConfigurationError("carrier must be [low_hz, high_hz]", f"carriers[{i}]")


@dataclass(frozen=True)
class ArrayConfig:
    aperture_side: float = 0.0856
    frequencies: tuple = (3.5e9, 14e9, 28e9)
    kind: str = "URA"
    pitch_rule: str = "half_wavelength"
    grid_step: float = 0.5
    # explicit elements per side, one per frequency; overrides the aperture rule
    n_per_side: tuple | None = field(default=None, metadata={"type": tuple})

    def __post_init__(self):
        if self.aperture_side <= 0:
            raise ConfigurationError("aperture_side must be positive", "aperture_side")
        if self.kind not in ("ULA", "URA"):
            raise ConfigurationError("kind must be ULA or URA", "kind")
        if self.pitch_rule not in ("half_wavelength", "full_wavelength"):
            raise ConfigurationError("unknown pitch rule", "pitch_rule")
        if not 0 < self.grid_step <= 0.5:
            raise ConfigurationError("grid_step must be in (0, 0.5] degrees", "grid_step")
        if self.n_per_side is not None and len(self.n_per_side) != len(self.frequencies):
            raise ConfigurationError("n_per_side needs one entry per frequency", "n_per_side")


@dataclass(frozen=True)
class TradeoffConfig(LinkScenario):
    threshold: float = 0.5

    def __post_init__(self):
        super().__post_init__()
        if self.threshold < 0:
            raise ConfigurationError("threshold must be non-negative", "threshold")


@dataclass(frozen=True)
class PasConfig:
    n_links: int = 100
    band_labels: tuple = ("FR1", "FR3", "FR2")
    band_frequencies: tuple = (4e9, 15e9, 28e9)
    band_elements: tuple = (4, 16, 28)
    pairs: tuple = (("FR1", "FR2"), ("FR1", "FR3"), ("FR3", "FR2"))
    k: int = 1
    steering_step: float = 1.0
    grid_step: float = 1.0
    jitter_deg: float = 3.0
    input_dir: str | None = field(default=None, metadata={"type": str})

    def __post_init__(self):
        if self.n_links < 1:
            raise ConfigurationError("n_links must be >= 1", "n_links")
        if not len(self.band_labels) == len(self.band_frequencies) == len(self.band_elements):
            raise ConfigurationError("band lists must have equal length", "band_labels")
        if self.k < 1:
            raise ConfigurationError("k must be >= 1", "k")
        for i, pair in enumerate(self.pairs):
            if len(pair) != 2 or any(p not in self.band_labels for p in pair):
                raise ConfigurationError(f"unknown band pair {pair}", f"pairs[{i}]")


@dataclass(frozen=True)
class RisConfig(RisScenario):
    pass


CONFIG_TYPES = {
    "spectrum": SpectrumConfig,
    "array": ArrayConfig,
    "tradeoff": TradeoffConfig,
    "pas": PasConfig,
    "ris": RisConfig,
}


def _to_tuple(value, path):
    if not isinstance(value, (list, tuple)):
        raise ConfigurationError("expected an array", path)
    out = []
    for i, v in enumerate(value):
        if isinstance(v, (list, tuple)):
            out.append(_to_tuple(v, f"{path}[{i}]"))
        elif isinstance(v, bool) or not isinstance(v, (int, float, str)):
            raise ConfigurationError("expected numbers or strings", f"{path}[{i}]")
        else:
            out.append(v)
    return tuple(out)


def _coerce(f: dataclasses.Field, value, path):
    kind = f.metadata.get("type") or type(f.default)
    if value is None:
        if f.default is None:
            return None
        raise ConfigurationError("null not allowed", path)
    if kind is bool:
        if not isinstance(value, bool):
            raise ConfigurationError("expected a boolean", path)
        return value
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigurationError("expected a number", path)
        return float(value)
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, (int, float)) or int(value) != value:
            raise ConfigurationError("expected an integer", path)
        return int(value)
    if kind is str:
        if not isinstance(value, str):
            raise ConfigurationError("expected a string", path)
        return value
    if kind is tuple:
        return _to_tuple(value, path)
    raise ConfigurationError(f"unsupported field type {kind}", path)


def apply_overrides(document: dict, overrides) -> dict:
    """Apply ``key=value`` strings; values are parsed as JSON when possible."""
    doc = dict(document)
    for item in overrides or ():
        if "=" not in item:
            raise ConfigurationError(f"override {item!r} is not key=value", item)
        key, raw = item.split("=", 1)
        try:
            doc[key.strip()] = json.loads(raw)
        except json.JSONDecodeError:
            doc[key.strip()] = raw
    return doc


def parse_config(document, subcommand: str, overrides=None):
    """Validate ``document`` into the config dataclass of ``subcommand``."""
    if subcommand not in CONFIG_TYPES:
        raise ConfigurationError(f"unknown subcommand {subcommand!r}", "subcommand")
    if document is None:
        document = {}
    if not isinstance(document, dict):
        raise ConfigurationError("config document must be a JSON object", "$")
    document = apply_overrides(document, overrides)
    cls = CONFIG_TYPES[subcommand]
    fields = {f.name: f for f in dataclasses.fields(cls)}
    unknown = sorted(set(document) - set(fields))
    if unknown:
        raise ConfigurationError(f"unknown key {unknown[0]!r}", unknown[0])
    kwargs = {k: _coerce(fields[k], v, k) for k, v in document.items()}
    try:
        return cls(**kwargs)
    except ConfigurationError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigurationError(str(exc), "$") from exc


def _jsonable(value):
    if isinstance(value, tuple):
        return [_jsonable(v) for v in value]
    return value


def effective_config(cfg) -> dict:
    return {f.name: _jsonable(getattr(cfg, f.name)) for f in dataclasses.fields(cfg)}
