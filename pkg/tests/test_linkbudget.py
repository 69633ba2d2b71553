import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fr3kit import linkbudget as lb
from fr3kit.errors import BeamwidthUndefinedError, ConfigurationError, DomainError

C = 299792458.0


def dense_oracle(step=1e6, height=100.0, side=0.0856, f_min=3e9, f_max=30e9, bw=(20e6, 200e6)):
    """Coverage/capacity gap on a dense grid, independent of the package code path."""
    lo, hi = 0.1, 0.9
    for _ in range(200):  # bisection for sinc^2(u) = 1/2
        mid = (lo + hi) / 2
        val = (math.sin(math.pi * mid) / (math.pi * mid)) ** 2
        lo, hi = (mid, hi) if val > 0.5 else (lo, mid)
    u = (lo + hi) / 2
    f = np.linspace(f_min, f_max, int(round((f_max - f_min) / step)) + 1)
    half = np.arcsin(u * C / f / side)
    radius = height * np.tan(half)
    cap = (bw[0] + (bw[1] - bw[0]) * (f - f_min) / (f_max - f_min)) * math.log2(11)
    cov_n = (radius - radius.min()) / np.ptp(radius)
    cap_n = (cap - cap.min()) / np.ptp(cap)
    return f, np.abs(cov_n - cap_n)


@pytest.fixture(scope="module")
def default_scan():
    return lb.ncc_scan(lb.LinkScenario())


def test_fspl_values():
    assert lb.fspl(1e9, 1.0) == pytest.approx(32.45, abs=0.01)
    assert lb.fspl(3.5e9, 100.0) == pytest.approx(83.32, abs=0.01)


@settings(max_examples=100, deadline=None)
@given(st.floats(1e8, 1e11), st.floats(0.1, 1e5), st.floats(0.01, 100))
def test_fspl_distance_ratio(f, d, k):
    assert lb.fspl(f, 2 * d) - lb.fspl(f, d) == pytest.approx(20 * math.log10(2), abs=1e-6)
    diff = lb.fspl(f, k * d) - lb.fspl(f, d)
    assert diff == pytest.approx(20 * math.log10(k), abs=1e-6)


def test_fspl_domain():
    with pytest.raises(DomainError):
        lb.fspl(0, 1)
    with pytest.raises(DomainError):
        lb.fspl(1e9, -1)


def test_coverage_radius():
    assert lb.coverage_radius(100, 90) == pytest.approx(100)
    assert lb.coverage_radius(100, 50.6) == pytest.approx(47.26, abs=0.1)
    assert lb.coverage_radius(100, 0) == 0
    with pytest.raises(DomainError):
        lb.coverage_radius(100, 180)
    r = [lb.coverage_radius(100, h) for h in np.linspace(0, 170, 50)]
    assert all(a < b for a, b in zip(r, r[1:]))


def test_bandwidth_map():
    s = lb.LinkScenario()
    assert lb.bandwidth_map(3e9, s) == pytest.approx(20e6)
    assert lb.bandwidth_map(30e9, s) == pytest.approx(200e6)
    assert lb.bandwidth_map(16.5e9, s) == pytest.approx(110e6)
    with pytest.raises(DomainError):
        lb.bandwidth_map(31e9, s)


def test_shannon_capacity():
    assert lb.shannon_capacity(1, 0) == pytest.approx(1.0)
    assert lb.shannon_capacity(1, 10) == pytest.approx(3.4594, abs=1e-4)
    assert lb.shannon_capacity(0, 10) == 0
    with pytest.raises(DomainError):
        lb.shannon_capacity(-1, 0)


def test_scenario_validation():
    with pytest.raises(ConfigurationError):
        lb.LinkScenario(height=0)
    with pytest.raises(ConfigurationError):
        lb.LinkScenario(f_min=30e9, f_max=3e9)


def test_scan_grid(default_scan):
    f = [p.frequency for p in default_scan]
    assert len(f) == 541
    assert f[0] == 3e9 and f[-1] == pytest.approx(30e9)


def test_scan_endpoints(default_scan):
    first, last = default_scan[0], default_scan[-1]
    assert (first.cov_norm, first.cap_norm, first.n_cc) == (1.0, 0.0, 1.0)
    assert (last.cov_norm, last.cap_norm, last.n_cc) == (0.0, 1.0, 1.0)


def test_scan_monotone_and_normalized(default_scan):
    radius = [p.radius for p in default_scan]
    cap = [p.capacity for p in default_scan]
    assert all(a > b for a, b in zip(radius, radius[1:]))
    assert all(a < b for a, b in zip(cap, cap[1:]))
    for attr in ("cov_norm", "cap_norm"):
        v = [getattr(p, attr) for p in default_scan]
        assert min(v) == 0 and max(v) == 1
    ncc = np.array([p.n_cc for p in default_scan])
    assert all(p.n_cc == abs(p.cov_norm - p.cap_norm) for p in default_scan)
    k = int(np.argmin(ncc))
    assert np.all(np.diff(ncc[: k + 1]) <= 0) and np.all(np.diff(ncc[k:]) >= 0)


def test_ncc_at_11ghz(default_scan):
    p = min(default_scan, key=lambda p: abs(p.frequency - 11e9))
    f, ncc = dense_oracle()
    assert ncc[np.argmin(np.abs(f - 11e9))] < 0.2
    assert p.n_cc < 0.2
    assert p.n_cc == pytest.approx(ncc[np.argmin(np.abs(f - 11e9))], abs=1e-9)


def test_balanced_band_default(default_scan):
    lo, hi = lb.balanced_band(default_scan, 0.5)
    assert lo == pytest.approx(4.6e9, abs=0.3e9)
    assert hi == pytest.approx(18.1e9, abs=0.3e9)
    f, ncc = dense_oracle()
    ok = f[ncc <= 0.5]
    assert lo == pytest.approx(ok.min(), abs=50e6)
    assert hi == pytest.approx(ok.max(), abs=50e6)


def test_balanced_band_thresholds(default_scan):
    assert lb.balanced_band(default_scan, 1.0) == (3e9, pytest.approx(30e9))
    lo, hi = lb.balanced_band(default_scan, 0.0)
    assert lo == pytest.approx(hi)
    f, ncc = dense_oracle()
    assert lo == pytest.approx(f[np.argmin(ncc)], abs=50e6)


def test_balanced_band_empty():
    pts = [lb.TradeoffPoint(f, 0, 0, 0, 0, 1.0, 0.0, 1.0) for f in (1.0, 2.0, 3.0)]
    assert lb.balanced_band(pts, 0.5) is None
    with pytest.raises(DomainError):
        lb.balanced_band([], 0.5)


def test_balanced_band_step_halving():
    coarse = lb.balanced_band(lb.ncc_scan(lb.LinkScenario(scan_step=100e6)), 0.5)
    fine = lb.balanced_band(lb.ncc_scan(lb.LinkScenario(scan_step=50e6)), 0.5)
    for a, b in zip(coarse, fine):
        assert a == pytest.approx(b, abs=100e6)


def test_element_model_scan_runs():
    s = replace(lb.LinkScenario(), hpbw_model="elements", scan_step=1e9)
    scan = lb.ncc_scan(s)
    assert len(scan) == 28
    radius = [p.radius for p in scan]
    assert all(a >= b for a, b in zip(radius, radius[1:]))


def test_scan_propagates_undefined_beamwidth():
    with pytest.raises(BeamwidthUndefinedError):
        lb.ncc_scan(lb.LinkScenario(f_min=0.5e9, f_max=3e9))
