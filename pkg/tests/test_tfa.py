"""Tests for the Morlet CWT, the scalogram picker and the STFT."""
import math

import numpy as np
import pytest
from scipy.integrate import trapezoid

from lamb_toa.common import InvalidParameter
from lamb_toa.estimators import Method, WindowTooLong
from lamb_toa.estimators import cwt as estimator_cwt
from lamb_toa.harness import relative_times
from lamb_toa.signal import DEFAULT_DT, Waveform, propagate_dispersive, tone_burst
from lamb_toa.signal.profiles import get_profile
from lamb_toa.tfa import (
    FrequencyOutOfRange,
    InconsistentChannels,
    coi_boundary,
    cwt,
    cwt_coefficients,
    cwt_tc_pick,
    frequency_grid,
    morlet,
    normalize_channels,
    scalogram_section,
    shared_normalizer,
    stft,
)


def _burst_record(n=4000, centre=2000, f0=100e3, scale=1.0, name="burst"):
    burst = tone_burst(f0, 5, dt=DEFAULT_DT).samples
    samples = np.zeros(n)
    start = centre - burst.size // 2
    samples[start : start + burst.size] = scale * burst
    return Waveform(samples, DEFAULT_DT, 0.0, name)


# ---------------------------------------------------------------------------
# Wavelet and grid
# ---------------------------------------------------------------------------
def test_morlet_has_unit_energy():
    t = np.linspace(-10, 10, 200001)
    assert trapezoid(np.abs(morlet(t)) ** 2, t) == pytest.approx(1.0, abs=1e-6)
    with pytest.raises(InvalidParameter):
        morlet(t, 0.0)


def test_frequency_grid_includes_both_ends():
    grid = frequency_grid(50e3, 100e3, 100.0)
    assert grid.size == 501 and grid[0] == 50e3 and grid[-1] == pytest.approx(100e3)
    assert frequency_grid(1.0, 2.0, 0.1).size == 11
    assert frequency_grid(5e3, 5e3).size == 1


@pytest.mark.parametrize("args", [(100e3, 50e3, 100.0), (0.0, 50e3, 100.0), (50e3, 100e3, 0.0)])
def test_bad_frequency_grids(args):
    with pytest.raises(FrequencyOutOfRange):
        frequency_grid(*args)


@pytest.mark.parametrize("freqs", [[3e6], [60e3, 50e3], [], [0.0, 10e3]])
def test_cwt_rejects_frequencies(freqs):
    with pytest.raises(FrequencyOutOfRange):
        cwt(_burst_record(), freqs)


# ---------------------------------------------------------------------------
# Transform
# ---------------------------------------------------------------------------
@pytest.mark.parametrize("offset", [-40.0, -10.0, 0.0, 25.0, 40.0])
def test_scalogram_peaks_in_the_nearest_bin(offset):
    dt, n, centre = 1e-6, 4096, 60e3
    t = np.arange(n) * dt
    w = Waveform(np.cos(2 * np.pi * (centre + offset) * t), dt)
    grid = frequency_grid(centre - 500, centre + 500, 100.0)
    sc = cwt(w, grid)
    assert int(np.argmax(sc.values[n // 2])) == sc.nearest(centre)


def test_default_scalogram_of_random_tones_peaks_in_the_nearest_bin():
    n = 20000
    t = np.arange(n) * DEFAULT_DT
    for f0 in np.random.default_rng(2024).uniform(5e3, 100e3, 10):
        nearest = 100.0 * round(f0 / 100.0)
        grid = frequency_grid(nearest - 1000.0, nearest + 1000.0, 100.0)
        sc = cwt(Waveform(np.cos(2 * np.pi * f0 * t), DEFAULT_DT), grid)
        peak = float(sc.freqs[np.argmax(sc.values[n // 2])])
        if abs(abs(f0 - nearest) - 50.0) > 2.0:
            assert peak == pytest.approx(nearest), f0
        else:
            # a tone halfway between two bins may land on either
            assert abs(peak - nearest) <= 100.0 + 1e-6, f0


def test_coefficients_are_linear():
    x, y = np.random.default_rng(8).standard_normal((2, 3000))
    grid = frequency_grid(50e3, 150e3, 25e3)

    def coefficients(samples):
        return cwt_coefficients(Waveform(samples, DEFAULT_DT), grid)

    expected = 2.0 * coefficients(x) - 0.5 * coefficients(y)
    combined = coefficients(2.0 * x - 0.5 * y)
    assert np.linalg.norm(combined - expected) <= 1e-9 * np.linalg.norm(expected)


def test_scalogram_shifts_with_the_signal_inside_the_cone():
    shift = 100
    w = _burst_record()
    moved = w.with_samples(np.roll(w.samples, shift))
    grid = frequency_grid(50e3, 150e3, 10e3)
    full = cwt(w, grid)
    a, b = full.values, cwt(moved, grid).values
    earliest, latest = coi_boundary(full)
    inside = np.flatnonzero((w.times > earliest.max()) & (w.times < latest.min()))
    rows = inside[inside + shift <= inside[-1]]
    assert rows.size > 3000
    np.testing.assert_allclose(b[rows + shift], a[rows], rtol=1e-8, atol=1e-12 * a.max())


def test_scalogram_window_keeps_the_record_edges():
    w = _burst_record()
    grid = frequency_grid(80e3, 120e3, 20e3)
    full = cwt(w, grid)
    part = cwt(w, grid, window=(100e-6, 300e-6))
    assert part.values.shape == (1001, 3)
    assert part.t0 == pytest.approx(100e-6)
    assert part.signal_span == full.signal_span
    np.testing.assert_allclose(part.values, full.values[500:1501])
    with pytest.raises(InvalidParameter):
        cwt(w, grid, window=(300e-6, 100e-6))


def test_cone_of_influence():
    w = _burst_record()
    grid = frequency_grid(50e3, 150e3, 50e3)
    sc = cwt(w, grid, support=3.0)
    earliest, latest = coi_boundary(sc)
    reach = 3.0 * 5.0 / (2 * math.pi * grid)
    np.testing.assert_allclose(earliest, w.t0 + reach)
    np.testing.assert_allclose(latest, w.t_end - reach)
    coi = sc.coi
    assert np.isinf(coi[0]) and np.isinf(coi[-1])
    mid = w.n // 2
    edge = min(w.times[mid] - w.t0, w.t_end - w.times[mid])
    assert coi[mid] == pytest.approx(3.0 * 5.0 / (2 * math.pi * edge))


def test_scalogram_table_and_section():
    w = _burst_record()
    sc = cwt(w, frequency_grid(90e3, 110e3, 10e3))
    frame = sc.to_frame()
    assert list(frame.columns) == ["time_s", "freq_hz", "value"]
    assert len(frame) == w.n * 3
    section = scalogram_section(sc, 101e3)
    assert section.name.endswith("@100000Hz")
    assert section.samples.max() <= 1.0 + 1e-12
    assert section.samples.max() == pytest.approx(sc.values[:, 1].max() / sc.normalizer)


# ---------------------------------------------------------------------------
# Picker
# ---------------------------------------------------------------------------
@pytest.fixture(scope="module")
def pair():
    grid = frequency_grid(80e3, 120e3, 10e3)
    weak = cwt(_burst_record(name="weak"), grid)
    strong = cwt(_burst_record(scale=2.0, name="strong"), grid)
    return weak, strong


def test_shared_normalizer_is_the_weaker_maximum(pair):
    weak, strong = pair
    assert shared_normalizer(pair) == weak.values.max()
    assert all(sc.normalizer == weak.values.max() for sc in normalize_channels(pair))


def test_threshold_is_strict_for_the_weaker_channel(pair):
    weak, _ = pair
    peak_f = float(weak.freqs[np.unravel_index(np.argmax(weak.values), weak.values.shape)[1]])
    at_one = cwt_tc_pick(pair, 1.0, freq_subset=[peak_f])
    assert not at_one[0][peak_f].found
    assert at_one[1][peak_f].found
    below = cwt_tc_pick(pair, 1.0 - 1e-9, freq_subset=[peak_f])
    assert below[0][peak_f].found
    assert below[0][peak_f].method is Method.CWT_TC
    assert below[0][peak_f].frequency == peak_f


def test_picker_rejects_mismatched_channels(pair):
    weak, _ = pair
    other = cwt(_burst_record(), frequency_grid(80e3, 120e3, 20e3))
    with pytest.raises(InconsistentChannels):
        cwt_tc_pick([weak, other], 0.5)
    with pytest.raises(InvalidParameter):
        cwt_tc_pick(pair, 0.0)


def test_subsample_crossing_falls_between_rows(pair):
    plain = cwt_tc_pick(pair, 0.3)
    fine = cwt_tc_pick(pair, 0.3, subsample=True)
    found = [f for f, estimate in plain[1].items() if estimate.found]
    assert found
    for f in found:
        estimate = plain[1][f]
        assert estimate.time - DEFAULT_DT <= fine[1][f].time <= estimate.time


def test_raising_the_threshold_never_picks_earlier(pair):
    thresholds = [0.01, 0.05, 0.2, 0.5, 0.9, 1.5, 3.0, 5.0]
    picks = [cwt_tc_pick(pair, p) for p in thresholds]
    for channel in range(len(pair)):
        for f in pair[0].freqs:
            f = float(f)
            seen = [picks[k][channel][f] for k in range(len(thresholds))]
            assert seen[0].found
            assert not seen[-1].found
            found = [e.found for e in seen]
            assert found == sorted(found, reverse=True)
            times = [e.time for e in seen if e.found]
            assert times == sorted(times)


def test_picks_survive_rescaling_every_channel(pair):
    grid = pair[0].freqs
    louder = [cwt(_burst_record(scale=4.0, name="weak"), grid), cwt(_burst_record(scale=8.0, name="strong"), grid)]
    for p in (0.05, 0.3, 0.8):
        for before, after in zip(cwt_tc_pick(pair, p), cwt_tc_pick(louder, p)):
            assert [(e.found, e.index) for e in before.values()] == [(e.found, e.index) for e in after.values()]


def test_relative_times_stay_flat_for_a_nondispersive_mode(generation_curves):
    source = get_profile("idealized").build(DEFAULT_DT, 5000, contact_time=10e-6, delay=0.0)
    far, near = 0.5188, 0.3496
    channels = [
        propagate_dispersive(source, generation_curves, r, {"S0": 1.0}, name=name)
        for name, r in (("S1", far), ("S2", near))
    ]
    scs = [cwt(w, frequency_grid(50e3, 100e3, 100.0)) for w in channels]
    picks = cwt_tc_pick(scs, 1e-2, subsample=True)
    table = relative_times({"S1": picks[0], "S2": picks[1]}, "S2")
    trusted = [f for f in table.index if not (picks[0][f].in_coi or picks[1][f].in_coi)]
    assert len(trusted) >= 10
    delays = table.loc[trusted, "S1"].to_numpy()
    assert np.ptp(delays) <= 0.2e-6
    expected = (far - near) / generation_curves["S0"].group_speed_at(75.0)
    assert np.mean(delays) == pytest.approx(expected, abs=1e-6)
    np.testing.assert_array_equal(table["S2"].to_numpy(), 0.0)


def test_cwt_adapter_flattens_channels_and_frequencies(monkeypatch):
    monkeypatch.setattr(
        estimator_cwt,
        "options",
        {**estimator_cwt.options, "f_lo": 90e3, "f_hi": 110e3, "spacing": 10e3, "window": [0.0, 600e-6]},
    )
    picks = estimator_cwt.pick_channels([_burst_record(name="A"), _burst_record(scale=2.0, name="B")])
    assert [(e.channel, e.frequency) for e in picks] == [
        (c, f) for c in ("A", "B") for f in (90e3, 100e3, 110e3)
    ]
    assert all(e.found for e in picks)


# ---------------------------------------------------------------------------
# STFT
# ---------------------------------------------------------------------------
def test_stft_finds_the_tone():
    fs, n = 1 / DEFAULT_DT, 4096
    f0 = 16 * fs / 256
    w = Waveform(np.sin(2 * np.pi * f0 * np.arange(n) * DEFAULT_DT), DEFAULT_DT)
    power = stft(w, window_len=256, hop=64)
    assert power.values.shape == ((n - 256) // 64 + 1, 129)
    assert np.all(np.argmax(power.values, axis=1) == 16)
    assert power.times[0] == pytest.approx(127.5 * DEFAULT_DT)


def test_stft_window_checks():
    w = Waveform(np.ones(100), DEFAULT_DT)
    with pytest.raises(WindowTooLong):
        stft(w, window_len=101)
    with pytest.raises(InvalidParameter):
        stft(w, window_len=50, hop=0)
