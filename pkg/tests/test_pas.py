import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose, assert_array_equal

from fr3kit import pas
from fr3kit.array import ArrayGeometry, array_power_gain
from fr3kit.errors import ComparisonError, DomainError, EmptyChannelError, NormalizationError
from oracles import cdf_by_counting, tv_by_subsets

GRID = pas.angle_grid()
ULA16 = ArrayGeometry.ula(16, 15e9)


def delta_pas(angle, power=1.0):
    p = np.zeros_like(GRID)
    p[np.argmin(np.abs(GRID - angle))] = power
    return pas.PowerAngularSpectrum(GRID, p)


def bpas_from(power, steering=GRID, label="x"):
    return pas.BeamformedPAS(np.asarray(steering, float), np.asarray(power, float), label, ULA16)


def test_beamform_single_element():
    spec = pas.synth_pas(1, [(10, 5, 0), (-40, 3, -6)])
    b = pas.beamform(spec, ArrayGeometry.ula(1, 4e9))
    assert_allclose(b.power, spec.total_power, rtol=1e-12)


def test_beamform_delta_peaks_at_arrival():
    for angle in (-52.0, 0.0, 17.0):
        b = pas.beamform(delta_pas(angle), ULA16)
        assert b.steering[np.argmax(b.power)] == angle


def test_beamform_two_delta_symmetry():
    p = delta_pas(-30).power + delta_pas(30).power
    b = pas.beamform(pas.PowerAngularSpectrum(GRID, p), ULA16)
    i, j = np.argmin(np.abs(GRID + 30)), np.argmin(np.abs(GRID - 30))
    assert b.power[i] == pytest.approx(b.power[j], rel=1e-9)
    # direct summation cross-check
    direct = sum(array_power_gain(ULA16, 30.0, a) for a in (-30.0, 30.0))
    assert b.power[j] == pytest.approx(direct, rel=1e-12)


def test_beamform_zero_power():
    with pytest.raises(EmptyChannelError):
        pas.beamform(pas.PowerAngularSpectrum(GRID, np.zeros_like(GRID)), ULA16)


def test_normalize():
    assert_allclose(pas.normalize(bpas_from(np.ones(181))), 1 / 181)
    assert_allclose(pas.normalize(bpas_from([1, 3], [0, 1])), [0.25, 0.75])
    b = bpas_from(np.arange(181.0) + 1)
    assert_allclose(pas.normalize(b), pas.normalize(bpas_from(b.power * 7.3)), rtol=1e-14)
    assert pas.normalize(b).sum() == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(NormalizationError):
        pas.normalize(bpas_from(np.zeros(181)))


def test_psp_examples():
    assert pas.psp([0.2, 0.8], [0.2, 0.8]) == 100.0
    assert pas.psp([1, 0], [0, 1]) == 0.0
    assert pas.psp([0.7, 0.3], [0.5, 0.5]) == pytest.approx(80.0, abs=1e-12)
    with pytest.raises(ComparisonError):
        pas.psp([1.0], [0.5, 0.5])


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 12).flatmap(lambda n: st.tuples(
    st.lists(st.floats(0, 10), min_size=n, max_size=n),
    st.lists(st.floats(0, 10), min_size=n, max_size=n),
)))
def test_psp_matches_subset_oracle(pq):
    p, q = (np.asarray(x) for x in pq)
    if p.sum() == 0 or q.sum() == 0:
        return
    p, q = p / p.sum(), q / q.sum()
    assert pas.psp(p, q) == pytest.approx(100 * (1 - tv_by_subsets(p, q)), abs=1e-10)
    assert pas.psp(p, q) == pas.psp(q, p)


def test_resample_to_coarser_grid():
    fine = pas.angle_grid(0.5)
    coarse = pas.angle_grid(1.0)
    mass = np.full(len(fine), 1 / len(fine))
    out = pas.resample_nearest(mass, fine, coarse)
    assert out.sum() == pytest.approx(1.0)
    assert len(out) == len(coarse)
    b_fine = pas.BeamformedPAS(fine, np.ones(len(fine)), "a", ULA16)
    b_coarse = pas.BeamformedPAS(coarse, np.ones(len(coarse)), "b", ULA16)
    p, q = pas.common_distributions(b_fine, b_coarse)
    assert p.shape == q.shape == coarse.shape


def test_top_k():
    b = pas.beamform(delta_pas(23), ULA16)
    assert pas.top_k_directions(b, 1)[0] == 23
    assert sorted(pas.top_k_directions(b, len(GRID))) == sorted(GRID)
    with pytest.raises(DomainError):
        pas.top_k_directions(b, 0)


def test_top_k_tie_break():
    b = bpas_from([1, 2, 2, 2, 1], [-2, -1, 0, 1, 2])
    assert_array_equal(pas.top_k_directions(b, 3), [0, -1, 1])
    b = bpas_from([5, 0, 5], [-1, 0, 1])
    assert_array_equal(pas.top_k_directions(b, 1), [-1])


def two_cluster_bpas():
    spec = pas.synth_pas(0, [(-30, 1.0, 0.0), (30, 1.0, -3.0)])
    return pas.beamform(spec, ULA16)


def test_top_2_two_clusters():
    b = two_cluster_bpas()
    # brute-force: the two strongest local maxima sit on the cluster centers
    p = b.power
    peaks = [i for i in range(1, len(p) - 1) if p[i] >= p[i - 1] and p[i] >= p[i + 1]]
    best = sorted(peaks, key=lambda i: -p[i])[:2]
    assert list(b.steering[best]) == [-30.0, 30.0]
    # ranked beams follow raw power, so the runner-up hugs the main lobe
    top2 = pas.top_k_directions(b, 2)
    assert top2[0] == -30.0
    order = np.argsort(-p, kind="stable")
    assert top2[1] == b.steering[order[1]]


def test_r_ratio_examples():
    b = two_cluster_bpas()
    top = pas.top_k_directions(b, 1)
    assert pas.r_ratio(b, top, top) == 0.0
    r = pas.r_ratio(b, [30.0], top)
    direct = 10 * math.log10(b.power[np.argmin(np.abs(GRID - 30))] / b.power.max())
    assert r == pytest.approx(direct, abs=1e-12)
    assert r == pytest.approx(-3.0, abs=0.25)


def test_r_ratio_floor():
    b = bpas_from(np.r_[np.zeros(90), 1.0, np.zeros(90)])
    assert pas.r_ratio(b, [-60.0], [0.0]) == pas.R_FLOOR_DB
    with pytest.raises(EmptyChannelError):
        pas.r_ratio(bpas_from(np.zeros(181)), [0.0], [0.0])


def test_empirical_cdf():
    assert pas.empirical_cdf([5]) == [(5.0, 1.0)]
    cdf = dict(pas.empirical_cdf([1, 2, 3]))
    assert cdf[2.0] == pytest.approx(2 / 3)
    assert pas.empirical_cdf([3, 1, 3, 2, 3]) == pytest.approx(cdf_by_counting([3, 1, 3, 2, 3]))
    with pytest.raises(DomainError):
        pas.empirical_cdf([])


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(-100, 100), min_size=1, max_size=50))
def test_cdf_monotone(values):
    cdf = pas.empirical_cdf(values)
    probs = [p for _, p in cdf]
    assert all(a <= b for a, b in zip(probs, probs[1:]))
    assert probs[-1] == 1.0
    assert cdf == pytest.approx(cdf_by_counting(values))


def test_synth_pas_deterministic():
    cl = [(10, 5, 0), (-20, 8, -4)]
    a = pas.synth_pas(42, cl, jitter_deg=4)
    b = pas.synth_pas(42, cl, jitter_deg=4)
    assert_array_equal(a.power, b.power)
    c = pas.synth_pas(43, cl, jitter_deg=4)
    assert not np.array_equal(a.power, c.power)


def test_synth_pas_peak_and_mass():
    one = pas.synth_pas(0, [(12, 4, 0)])
    assert one.angles[np.argmax(one.power)] == 12
    cl = [(0, 5, 0), (40, 3, -3), (-70, 6, -6)]
    spec = pas.synth_pas(0, cl)
    # analytic Laplacian mass (closed form, no truncation)
    expected = sum(10 ** (p / 10) for _, _, p in cl)
    assert spec.total_power == pytest.approx(expected, rel=0.01)
    with pytest.raises(DomainError):
        pas.synth_pas(0, [(0, 0, 0)])


def random_link(seed):
    return pas.synthetic_link(seed, 0)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.floats(0.01, 100), st.floats(0.01, 100))
def test_beamform_linear(seed, a, b):
    rng = np.random.default_rng(seed)
    p1 = pas.synth_pas(seed, pas.random_clusters(rng))
    p2 = pas.synth_pas(seed + 1, pas.random_clusters(rng))
    mix = pas.PowerAngularSpectrum(GRID, a * p1.power + b * p2.power)
    lhs = pas.beamform(mix, ULA16).power
    rhs = a * pas.beamform(p1, ULA16).power + b * pas.beamform(p2, ULA16).power
    assert_allclose(lhs, rhs, rtol=1e-9)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 5))
def test_similarity_properties(seed, k):
    spectra = random_link(seed)
    bands = {b.label: b for b in pas.DEFAULT_BANDS}
    bp = {lbl: pas.beamform(spectra[lbl], bands[lbl].geometry(), band_label=lbl) for lbl in spectra}
    for lo, hi in pas.DEFAULT_PAIRS:
        res = pas.compare(bp[lo], bp[hi], k)
        assert 0 <= res.psp <= 100
        assert res.r_db <= 1e-9
        rev = pas.compare(bp[hi], bp[lo], k)
        assert rev.psp == pytest.approx(res.psp, abs=1e-12)
    same = pas.compare(bp["FR3"], bp["FR3"], k)
    assert same.psp == 100.0 and same.r_db == 0.0


def test_psp_scale_invariant():
    spectra = random_link(3)
    g = pas.DEFAULT_BANDS[0].geometry()
    b1 = pas.beamform(spectra["FR1"], g)
    b2 = pas.beamform(spectra["FR2"], g)
    b2s = pas.beamform(spectra["FR2"].scaled(123.0), g)
    assert pas.compare(b1, b2).psp == pytest.approx(pas.compare(b1, b2s).psp, abs=1e-10)


def test_evaluate_links_ordering():
    links = {f"L{i}": pas.synthetic_link(9, i) for i in (3, 1, 2)}
    ens = pas.evaluate_links(links)
    assert list(ens) == ["FR1-FR2", "FR1-FR3", "FR3-FR2"]
    assert [r.link_id for r in ens["FR1-FR3"].results] == ["L1", "L2", "L3"]


def test_pas_csv_roundtrip(tmp_path):
    link = pas.synthetic_link(0, 0)
    for label, spec in link.items():
        lines = ["link_id,angle_deg,power_linear"]
        lines += [f"A,{float(a)!r},{float(p)!r}" for a, p in zip(spec.angles, spec.power)]
        (tmp_path / f"{label}.csv").write_text("\n".join(lines) + "\n")
    loaded = pas.load_pas_dir(tmp_path, ["FR1", "FR3", "FR2"])
    assert list(loaded) == ["A"]
    assert_array_equal(loaded["A"]["FR3"].power, link["FR3"].power)
    (tmp_path / "FR2.csv").write_text("link_id,angle_deg,power_linear\nB,0,1\n")
    with pytest.raises(ComparisonError):
        pas.load_pas_dir(tmp_path, ["FR1", "FR2"])
