"""RIS-aided link evaluation: element counts, cascaded SNR, SE and EE sweeps.

The surface is a square of fixed side with one-wavelength element pitch. Each
element scatters isotropically and the phase shifters align all N
contributions coherently, so the received power scales with N^2 times the two
free-space segment gains. Finite phase resolution costs the factor
sinc^2(pi / 2^bits).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT

from .array import elements_for_aperture
from .errors import ApertureTooSmallError, ConfigurationError


def dbm_to_watts(dbm):
    return 10 ** (np.asarray(dbm, dtype=float) / 10) * 1e-3


def db_to_linear(db):
    return 10 ** (db / 10)


# -174 dBm/Hz thermal floor plus a 9 dB receiver noise figure
DEFAULT_NOISE_DENSITY = float(dbm_to_watts(-174 + 9))


@dataclass(frozen=True)
class RisScenario:
    tx_pos: tuple = (0.0, 0.0, 3.0)
    ris_pos: tuple = (2.5, 5.0, 3.0)
    rx_pos: tuple = (5.0, 0.0, 1.5)
    side: float = 0.20
    frequency: float = 15e9
    pt_range: tuple = (-10.0, 40.0, 1.0)
    phase_bits: int = 4
    p_phase_shifter: float = 4.5e-3
    n_users: int = 20
    p_user: float = 10e-3
    noise_density: float = DEFAULT_NOISE_DENSITY
    ref_bandwidth: float = 100e6
    g_tx: float = db_to_linear(10.0)
    g_rx: float = db_to_linear(10.0)

    def __post_init__(self):
        for name in ("tx_pos", "ris_pos", "rx_pos", "pt_range"):
            object.__setattr__(self, name, tuple(float(x) for x in getattr(self, name)))
        checks = [
            (len(self.tx_pos) == 3, "tx_pos"),
            (len(self.ris_pos) == 3, "ris_pos"),
            (len(self.rx_pos) == 3, "rx_pos"),
            (self.side > 0, "side"),
            (self.frequency > 0, "frequency"),
            (len(self.pt_range) == 3 and self.pt_range[0] <= self.pt_range[1] and self.pt_range[2] > 0, "pt_range"),
            (int(self.phase_bits) == self.phase_bits and self.phase_bits >= 1, "phase_bits"),
            (self.p_phase_shifter >= 0, "p_phase_shifter"),
            (self.n_users >= 0, "n_users"),
            (self.p_user >= 0, "p_user"),
            (self.noise_density > 0, "noise_density"),
            (self.ref_bandwidth > 0, "ref_bandwidth"),
            (self.g_tx > 0, "g_tx"),
            (self.g_rx > 0, "g_rx"),
        ]
        for ok, key in checks:
            if not ok:
                raise ConfigurationError(f"invalid value for {key!r}", key)
        if self.d1 <= 0 or self.d2 <= 0:
            raise ConfigurationError("RIS must not coincide with an endpoint", "ris_pos")

    @property
    def d1(self) -> float:
        return math.dist(self.tx_pos, self.ris_pos)

    @property
    def d2(self) -> float:
        return math.dist(self.ris_pos, self.rx_pos)

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.frequency

    def pt_grid(self) -> np.ndarray:
        lo, hi, step = self.pt_range
        n = int(math.floor((hi - lo) / step + 1e-9)) + 1
        return lo + step * np.arange(n)


@dataclass(frozen=True)
class RisResult:
    pt_dbm: float
    n_elements: int
    snr_db: float
    se: float
    ee: float
    p_total: float


@dataclass(frozen=True)
class SweepSummary:
    mean_se: float
    mean_ee: float
    mean_se_gaps: dict


# frequency -> (phase bits, phase-shifter power in W)
CASE_STUDY_CONFIGS = {
    3.5e9: (6, 7.8e-3),
    15e9: (4, 4.5e-3),
    28e9: (3, 1.5e-3),
}


def case_study_scenarios(base: RisScenario | None = None) -> dict:
    """The 3.5 / 15 / 28 GHz case-study scenarios keyed by label."""
    base = RisScenario() if base is None else base
    return {
        f"{f / 1e9:g}GHz": replace(base, frequency=f, phase_bits=bits, p_phase_shifter=pw)
        for f, (bits, pw) in CASE_STUDY_CONFIGS.items()
    }


def element_grid(side: float, frequency: float) -> int:
    """Elements per side at one-wavelength pitch."""
    n = elements_for_aperture(side, frequency, "full_wavelength")
    if n == 0:
        raise ApertureTooSmallError(f"a {side} m RIS holds no element at {frequency:g} Hz")
    return n


def n_elements(scenario: RisScenario) -> int:
    return element_grid(scenario.side, scenario.frequency) ** 2


def quantization_efficiency(bits) -> float:
    """Coherent gain loss sinc^2(pi / 2^bits) from uniform phase quantization."""
    if bits == math.inf:
        return 1.0
    if bits < 1:
        raise ConfigurationError("phase_bits must be >= 1", "phase_bits")
    x = math.pi / 2**bits
    return (math.sin(x) / x) ** 2


def cascaded_gain(scenario: RisScenario) -> float:
    """End-to-end linear power gain Tx -> RIS -> Rx, excluding transmit power."""
    lam = scenario.wavelength
    n = n_elements(scenario)
    seg1 = (lam / (4 * math.pi * scenario.d1)) ** 2
    seg2 = (lam / (4 * math.pi * scenario.d2)) ** 2
    return scenario.g_tx * scenario.g_rx * n**2 * seg1 * seg2 * quantization_efficiency(scenario.phase_bits)


def cascaded_snr(scenario: RisScenario, pt_dbm):
    noise = scenario.noise_density * scenario.ref_bandwidth
    return dbm_to_watts(pt_dbm) * cascaded_gain(scenario) / noise


def spectral_efficiency(scenario: RisScenario, pt_dbm):
    return np.log2(1 + cascaded_snr(scenario, pt_dbm))


def total_power(scenario: RisScenario, pt_dbm):
    static = scenario.n_users * scenario.p_user + n_elements(scenario) * scenario.p_phase_shifter
    return dbm_to_watts(pt_dbm) + static


def energy_efficiency(scenario: RisScenario, pt_dbm):
    """Bits per joule over the reference bandwidth."""
    return scenario.ref_bandwidth * spectral_efficiency(scenario, pt_dbm) / total_power(scenario, pt_dbm)


def evaluate(scenario: RisScenario, pt_dbm: float) -> RisResult:
    snr = float(cascaded_snr(scenario, pt_dbm))
    return RisResult(
        pt_dbm=float(pt_dbm),
        n_elements=n_elements(scenario),
        snr_db=10 * math.log10(snr) if snr > 0 else -math.inf,
        se=math.log2(1 + snr),
        ee=float(energy_efficiency(scenario, pt_dbm)),
        p_total=float(total_power(scenario, pt_dbm)),
    )


def sweep(scenario: RisScenario, references: dict | None = None):
    """Evaluate every transmit power of the scenario's sweep.

    ``references`` maps labels to scenarios evaluated on the same power grid;
    the summary reports mean SE(scenario) - SE(reference) for each.
    """
    pts = scenario.pt_grid()
    results = [evaluate(scenario, p) for p in pts]
    se = np.array([r.se for r in results])
    gaps = {}
    for label, ref in (references or {}).items():
        gaps[label] = float(np.mean(se - spectral_efficiency(ref, pts)))
    summary = SweepSummary(
        mean_se=float(se.mean()),
        mean_ee=float(np.mean([r.ee for r in results])),
        mean_se_gaps=gaps,
    )
    return results, summary


def compare_case_studies(base: RisScenario | None = None, focus: str = "15GHz") -> dict:
    """Mean SE gap of the ``focus`` configuration against the other two."""
    scen = case_study_scenarios(base)
    refs = {k: v for k, v in scen.items() if k != focus}
    _, summary = sweep(scen[focus], refs)
    return summary.mean_se_gaps
