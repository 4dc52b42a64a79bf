"""Tests for waveforms, synthesis, noise, filtering, layout and CSV I/O.

Marker reference (30 mm patches, c_S0 = 5392 m/s, c_A0 = 3156 m/s,
effective distance r - 15 sqrt(2) mm):

    impact  sensor   r (mm)   t_S0 (us)   t_A0 (us)
    I1      S1       518.8     92.2       157.6
    I1      S2       349.6     60.8       104.0
    I1      S3       643.9    115.4       197.2
    I1      S4       517.4     92.0       157.2
    I2      S1       110.3     16.4        28.2
    I2      S2       577.3    103.0       176.2
    I2      S3       676.5    121.4       207.6
    I2      S4       882.5    159.6       272.8
"""
import numpy as np
import pytest
from scipy import fft as sp_fft
from scipy.signal import hilbert

from lamb_toa.common import IndexOutOfRange, InvalidParameter
from lamb_toa.dispersion import A1, ALUMINIUM, trace_mode, trace_modes
from lamb_toa.signal import (
    DEFAULT_DT,
    REFERENCE_LAYOUT,
    BandNotCovered,
    CutoffOutOfRange,
    InvalidWaveform,
    NyquistViolation,
    SensorLayout,
    Waveform,
    ZeroSignal,
    a0_arrival_window,
    add_noise,
    channel_seed,
    check_dt,
    distances,
    effective_distances,
    lowpass,
    noise_floor,
    propagate_dispersive,
    read_waveforms_csv,
    reference_markers,
    stats,
    synthesize_channels,
    tone_burst,
    write_waveforms_csv,
)
from lamb_toa.signal.filters import design, settling_length
from lamb_toa.signal.generate import delay_taper, dispersive_spectrum
from lamb_toa.signal.profiles import enumerate_profiles, get_profile
from lamb_toa.estimators import common_threshold, tc_pick

MARKERS = {
    "I1": [("S1", 518.8, 92.2, 157.6), ("S2", 349.6, 60.8, 104.0), ("S3", 643.9, 115.4, 197.2), ("S4", 517.4, 92.0, 157.2)],
    "I2": [("S1", 110.3, 16.4, 28.2), ("S2", 577.3, 103.0, 176.2), ("S3", 676.5, 121.4, 207.6), ("S4", 882.5, 159.6, 272.8)],
}


def _rms(x):
    return float(np.sqrt(np.mean(np.square(x))))


# ---------------------------------------------------------------------------
# Waveform
# ---------------------------------------------------------------------------
def test_waveform_samples_are_copied_and_frozen():
    raw = np.array([0.0, 1.0, 2.0])
    w = Waveform(raw, 1e-6)
    raw[0] = 9.0
    assert w.samples[0] == 0.0
    with pytest.raises(ValueError):
        w.samples[1] = 5.0


@pytest.mark.parametrize("samples, dt", [([1.0], 1e-6), ([[1.0, 2.0]], 1e-6), ([1.0, 2.0], 0.0), ([1.0, 2.0], np.nan)])
def test_invalid_waveforms(samples, dt):
    with pytest.raises(InvalidWaveform):
        Waveform(samples, dt)


def test_time_axis_and_crop():
    w = Waveform(np.arange(10.0), 0.5, t0=1.0)
    assert w.t_end == pytest.approx(5.5)
    assert w.index_of(-100.0) == 0 and w.index_of(100.0) == 9
    part = w.crop(2.0, 3.0)
    np.testing.assert_array_equal(part.samples, [2.0, 3.0, 4.0])
    assert part.t0 == pytest.approx(2.0)
    with pytest.raises(InvalidWaveform):
        w.crop(2.0, 2.0)


def test_stats_of_an_alternating_sequence():
    s = stats(Waveform([1.0, -1.0, 1.0, -1.0], 1.0))
    assert (s.mean, s.variance, s.rms, s.energy) == (0.0, 1.0, 1.0, 4.0)


# ---------------------------------------------------------------------------
# Excitations
# ---------------------------------------------------------------------------
def test_tone_burst_length_and_peak():
    w = tone_burst(100e3, 5, dt=DEFAULT_DT)
    assert w.n == 250
    assert np.max(np.abs(w.samples)) == pytest.approx(1.0, abs=1e-2)
    assert int(np.argmax(w.samples)) in (124, 125)
    assert tone_burst(100e3, 5, dt=DEFAULT_DT, pad=100).n == 450


def test_tone_burst_above_nyquist():
    with pytest.raises(NyquistViolation):
        tone_burst(3e6, 5, dt=DEFAULT_DT)


@pytest.mark.parametrize("window", ["hanning", "gaussian", "blackman"])
def test_tone_burst_windows_taper_to_the_edges(window):
    w = tone_burst(50e3, 3, window, dt=DEFAULT_DT)
    assert abs(w.samples[0]) < 0.05 and abs(w.samples[-1]) < 0.05


def test_tone_burst_unknown_window():
    with pytest.raises(InvalidParameter):
        tone_burst(50e3, 3, "kaiser", dt=DEFAULT_DT)


def test_profiles_are_discovered_by_prefix():
    assert set(enumerate_profiles()) == {"idealized", "experiment_based", "tone_burst"}
    with pytest.raises(InvalidParameter):
        get_profile("hammer")


def test_idealized_profile_is_a_short_unipolar_pulse(idealized_source):
    s = idealized_source.samples
    inside = np.flatnonzero(s > 0)
    assert s.min() >= 0.0
    assert idealized_source.time_at(inside[-1]) <= 10e-6 + 1e-12
    assert s.max() == pytest.approx(1.0, abs=1e-3)


def test_experiment_based_profile_keeps_ringing():
    w = get_profile("experiment_based").build(DEFAULT_DT, 10000)
    late = w.samples[w.index_of(1e-3) :]
    assert np.max(np.abs(late)) > 0.05
    assert w.samples[0] == pytest.approx(0.0)


# ---------------------------------------------------------------------------
# Propagation
# ---------------------------------------------------------------------------
def test_zero_distance_gives_back_the_source(generation_curves):
    source = tone_burst(100e3, 5, dt=DEFAULT_DT, pad=1000)
    out = propagate_dispersive(source, generation_curves["S0"], 0.0, {"S0": 1.0})
    np.testing.assert_allclose(out.samples, source.samples, atol=1e-4)
    assert out.n == source.n and out.dt == source.dt


def test_zero_distance_is_the_band_limited_source(generation_curves):
    source = tone_burst(100e3, 5, dt=DEFAULT_DT, pad=1000)
    result = dispersive_spectrum(source, generation_curves["S0"], 0.0, {"S0": 1.0})
    band_limited = sp_fft.irfft(np.where(result.retained, result.source, 0.0), result.nfft)[: source.n]
    out = propagate_dispersive(source, generation_curves["S0"], 0.0, {"S0": 1.0})
    assert np.linalg.norm(out.samples - band_limited) < 1e-9 * np.linalg.norm(band_limited)


def test_phase_delay_keeps_the_retained_energy(generation_curves):
    source = tone_burst(100e3, 5, dt=DEFAULT_DT, pad=1000)
    result = dispersive_spectrum(source, generation_curves["S0"], 0.3, {"S0": 1.0})
    kept = result.retained
    assert kept.sum() > 0
    energy_in = np.sum(np.abs(result.source[kept]) ** 2)
    assert np.sum(np.abs(result.output[kept]) ** 2) == pytest.approx(energy_in, rel=1e-9)


def test_s0_burst_travels_at_the_group_speed(generation_curves):
    burst = tone_burst(100e3, 5, dt=DEFAULT_DT).samples
    source = Waveform(np.concatenate([burst, np.zeros(2750)]), DEFAULT_DT)
    distance = 0.5
    out = propagate_dispersive(source, generation_curves, distance, {"S0": 1.0})
    t_in = source.time_at(int(np.argmax(np.abs(hilbert(source.samples)))))
    t_out = out.time_at(int(np.argmax(np.abs(hilbert(out.samples)))))
    expected = distance / generation_curves["S0"].group_speed_at(100.0)
    assert t_out - t_in == pytest.approx(expected, abs=1e-6)


def test_geometric_spreading_scales_by_root_distance(generation_curves):
    source = tone_burst(100e3, 5, dt=DEFAULT_DT, pad=2000)
    plain = propagate_dispersive(source, generation_curves, 0.4, {"S0": 1.0})
    spread = propagate_dispersive(source, generation_curves, 0.4, {"S0": 1.0}, spreading=True)
    np.testing.assert_allclose(spread.samples, plain.samples * np.sqrt(0.1 / 0.4), atol=1e-12)


def test_all_weights_zero_gives_silence(generation_curves):
    source = tone_burst(100e3, 5, dt=DEFAULT_DT, pad=500)
    out = propagate_dispersive(source, generation_curves, 0.3, {"S0": 0.0, "A0": 0.0})
    assert not np.any(out.samples)


def test_modes_without_a_weight_stay_silent(generation_curves, idealized_source):
    a1 = trace_mode(ALUMINIUM, A1, np.arange(800.0, 900.0))
    with_a1 = propagate_dispersive(idealized_source, [*generation_curves.values(), a1], 0.3)
    plain = propagate_dispersive(idealized_source, generation_curves, 0.3)
    np.testing.assert_array_equal(with_a1.samples, plain.samples)


def test_band_outside_the_curve_is_reported():
    short = trace_modes(ALUMINIUM, ["S0"], np.arange(1.0, 51.0))
    source = tone_burst(100e3, 5, dt=DEFAULT_DT, pad=500)
    with pytest.raises(BandNotCovered) as info:
        propagate_dispersive(source, short, 0.3, {"S0": 1.0})
    assert info.value.mode_name == "S0"


def test_negative_distance_is_rejected(generation_curves):
    with pytest.raises(InvalidParameter):
        propagate_dispersive(tone_burst(100e3, 5, dt=DEFAULT_DT), generation_curves, -0.1)


def test_delay_taper_shape():
    gain = delay_taper(np.array([0.0, 1.0, 1.5, 2.0, 3.0, np.nan]), 1.0, 2.0)
    np.testing.assert_allclose(gain, [1.0, 1.0, 0.5, 0.0, 0.0, 0.0], atol=1e-15)


def test_slow_components_are_dropped_from_the_spectrum(generation_curves, idealized_source):
    result = dispersive_spectrum(idealized_source, generation_curves, 0.35)
    assert result.nfft >= 16 * idealized_source.n
    assert not result.retained[0]
    assert result.retained[result.freqs.searchsorted(50e3)]


def test_channels_are_named_after_the_sensors(i1_channels, idealized_source):
    assert [w.name for w in i1_channels] == ["S1", "S2", "S3", "S4"]
    assert all(w.n == idealized_source.n and w.dt == idealized_source.dt for w in i1_channels)


def test_nearest_sensor_hears_the_impact_first(i1_channels):
    threshold = common_threshold(i1_channels, 0.05)
    picks = {w.name: tc_pick(w, threshold) for w in i1_channels}
    assert all(e.found for e in picks.values())
    assert min(picks, key=lambda name: picks[name].time) == "S2"
    assert 62e-6 <= picks["S2"].time <= 75e-6


def test_record_is_quiet_before_the_s0_front(i1_channels):
    s2 = i1_channels[1]
    peak = np.max(np.abs(s2.samples))
    before = s2.samples[: s2.index_of(50e-6)]
    assert np.max(np.abs(before)) < 1e-3 * peak


def test_band_error_names_the_channel(idealized_source):
    short = trace_modes(ALUMINIUM, ["S0"], np.arange(1.0, 21.0))
    with pytest.raises(BandNotCovered) as info:
        synthesize_channels(REFERENCE_LAYOUT, 0, idealized_source, short, {"S0": 1.0})
    assert info.value.channel == "S1"
    assert str(info.value).startswith("S1: ")


# ---------------------------------------------------------------------------
# Noise
# ---------------------------------------------------------------------------
@pytest.fixture(scope="module")
def long_tone():
    t = np.arange(100000) * DEFAULT_DT
    return Waveform(np.sin(2 * np.pi * 50e3 * t), DEFAULT_DT, name="tone")


@pytest.mark.parametrize("seed", range(20))
def test_noise_meets_the_requested_snr(long_tone, seed):
    noisy = add_noise(long_tone, 20.0, seed)
    noise = noisy.samples - long_tone.samples
    snr = 20 * np.log10(_rms(long_tone.samples) / _rms(noise))
    assert snr == pytest.approx(20.0, abs=0.1)


def test_noise_is_reproducible(long_tone):
    a = add_noise(long_tone, 10.0, channel_seed(3, 1))
    b = add_noise(long_tone, 10.0, channel_seed(3, 1))
    c = add_noise(long_tone, 10.0, channel_seed(3, 2))
    np.testing.assert_array_equal(a.samples, b.samples)
    assert not np.array_equal(a.samples, c.samples)


def test_snr_is_capped(long_tone):
    noisy = add_noise(long_tone, 1000.0, 0)
    assert np.max(np.abs(noisy.samples - long_tone.samples)) < 1e-12


def test_noise_on_silence():
    with pytest.raises(ZeroSignal):
        add_noise(Waveform(np.zeros(100), DEFAULT_DT), 20.0)


def test_noise_floor(long_tone):
    assert noise_floor(long_tone, 0.0) is long_tone
    floor = noise_floor(long_tone, 1e-3, 5).samples - long_tone.samples
    assert np.std(floor) == pytest.approx(1e-3, rel=0.02)
    with pytest.raises(InvalidParameter):
        noise_floor(long_tone, -1.0)


# ---------------------------------------------------------------------------
# Low-pass
# ---------------------------------------------------------------------------
def test_lowpass_keeps_the_slow_tone_in_place():
    t = np.arange(10000) * DEFAULT_DT
    slow = np.sin(2 * np.pi * 2e3 * t)
    w = Waveform(slow + np.sin(2 * np.pi * 200e3 * t), DEFAULT_DT)
    filtered = lowpass(w, 20e3).samples
    interior = slice(1000, 9000)
    np.testing.assert_allclose(filtered[interior], slow[interior], atol=5e-3)


def test_lowpass_passes_a_constant():
    w = Waveform(np.full(5000, 3.0), DEFAULT_DT)
    np.testing.assert_allclose(lowpass(w, 20e3).samples, 3.0, rtol=1e-9)


def test_lowpass_is_linear():
    x, y = np.random.default_rng(4).standard_normal((2, 6000))

    def filtered(samples):
        return lowpass(Waveform(samples, DEFAULT_DT), 50e3).samples

    expected = 2.5 * filtered(x) - 0.75 * filtered(y)
    combined = filtered(2.5 * x - 0.75 * y)
    assert np.linalg.norm(combined - expected) <= 1e-9 * np.linalg.norm(expected)


def test_lowpass_attenuates_ten_times_the_cutoff():
    cutoff = 20e3
    t = np.arange(20000) * DEFAULT_DT
    w = Waveform(np.sin(2 * np.pi * 10 * cutoff * t), DEFAULT_DT)
    interior = lowpass(w, cutoff).samples[4000:16000]
    assert np.max(np.abs(interior)) <= 1e-2


def test_lowpass_keeps_the_envelope_peak():
    burst = tone_burst(5e3, 5, dt=DEFAULT_DT, pad=5000)
    filtered = lowpass(burst, 20e3)

    def envelope_peak(samples):
        return int(np.argmax(np.abs(hilbert(samples))))

    assert abs(envelope_peak(filtered.samples) - envelope_peak(burst.samples)) <= 1


@pytest.mark.parametrize("cutoff", [0.0, -1.0, 2.5e6, 3e6])
def test_cutoff_outside_nyquist(cutoff):
    with pytest.raises(CutoffOutOfRange):
        lowpass(Waveform(np.ones(100), DEFAULT_DT), cutoff)


def test_settling_length_grows_as_the_cutoff_drops():
    fs = 1 / DEFAULT_DT
    assert settling_length(design(5e3, fs)) > settling_length(design(50e3, fs)) > 0


# ---------------------------------------------------------------------------
# Layout and markers
# ---------------------------------------------------------------------------
@pytest.mark.parametrize("impact", ["I1", "I2"])
def test_reference_markers_table(impact):
    markers = reference_markers(REFERENCE_LAYOUT, impact, 5392.0, 3156.0)
    r = distances(REFERENCE_LAYOUT, impact)
    for marker, distance, (sensor, r_mm, t_s0, t_a0) in zip(markers, r, MARKERS[impact]):
        assert marker.sensor == sensor
        assert distance * 1e3 == pytest.approx(r_mm, abs=0.1)
        assert marker.t_s0 * 1e6 == pytest.approx(t_s0, abs=0.3)
        assert marker.t_a0 * 1e6 == pytest.approx(t_a0, abs=0.3)


def test_effective_distance_is_clamped_at_zero():
    layout = SensorLayout([(0.1, 0.1), (0.5, 0.1)], [(0.1, 0.1)], patch_width=0.03)
    np.testing.assert_allclose(effective_distances(layout, 0), [0.0, 0.4 - 0.015 * np.sqrt(2)])


def test_layout_validation():
    with pytest.raises(InvalidParameter):
        SensorLayout([(0.1, 0.1)], [(2.0, 0.1)], plate_size=(1.0, 1.0))
    with pytest.raises(InvalidParameter):
        SensorLayout([(0.1, 0.1)], [(0.5, 0.5)], patch_width=-0.01)
    with pytest.raises(IndexOutOfRange):
        REFERENCE_LAYOUT.impact_index("I9")
    with pytest.raises(IndexOutOfRange):
        REFERENCE_LAYOUT.impact_index(2)


def test_a0_arrival_window_in_band(generation_curves):
    windows = a0_arrival_window(REFERENCE_LAYOUT, "I1", generation_curves["A0"], (10e3, 20e3))
    assert len(windows) == 4
    for earliest, latest in windows:
        assert 0 < earliest < latest
    with pytest.raises(InvalidParameter):
        a0_arrival_window(REFERENCE_LAYOUT, "I1", generation_curves["A0"], (10e3, 5e6))


# ---------------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------------
def test_waveform_csv_round_trip(tmp_path):
    rng = np.random.default_rng(1)
    channels = [Waveform(rng.standard_normal(500), DEFAULT_DT, 0.0, name) for name in ("S1", "S2")]
    path = write_waveforms_csv(channels, str(tmp_path / "w.csv"))
    back = read_waveforms_csv(path, expected_dt=DEFAULT_DT)
    assert [w.name for w in back] == ["S1", "S2"]
    for a, b in zip(channels, back):
        np.testing.assert_array_equal(a.samples, b.samples)
        assert b.dt == pytest.approx(DEFAULT_DT, rel=1e-9)


def test_csv_with_a_different_dt_is_rejected(tmp_path):
    path = write_waveforms_csv([Waveform(np.zeros(10), 1e-6, 0.0, "S1")], str(tmp_path / "w.csv"))
    with pytest.raises(InvalidWaveform):
        read_waveforms_csv(path, expected_dt=DEFAULT_DT)


def test_csv_with_an_uneven_time_column_is_rejected(tmp_path):
    path = tmp_path / "w.csv"
    path.write_text("time_s,S1\n0,1\n1e-6,2\n3e-6,3\n")
    with pytest.raises(InvalidWaveform):
        read_waveforms_csv(str(path))


def test_missing_csv(tmp_path):
    with pytest.raises(FileNotFoundError):
        read_waveforms_csv(str(tmp_path / "nope.csv"))


def test_check_dt_on_mixed_channels():
    with pytest.raises(InvalidWaveform):
        check_dt([Waveform(np.zeros(4), 1e-6), Waveform(np.zeros(4), 2e-6)])
    assert check_dt([Waveform(np.zeros(4), 1e-6)]) == 1e-6
